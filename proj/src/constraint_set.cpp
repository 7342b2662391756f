#include "mucx/constraint_set.hpp"

#include "mucx/error.hpp"

namespace mucx {

namespace {

void require_same_universe(std::size_t a, std::size_t b) {
  if (a != b)
    throw ContractError("constraint sets over different universes (" + std::to_string(a) + " vs " +
                        std::to_string(b) + ")");
}

}  // namespace

void ConstraintSet::insert(ConstraintId id) {
  if (id >= bits_.size()) throw ContractError("constraint id " + std::to_string(id) + " out of range");
  bits_.set(id);
}

void ConstraintSet::erase(ConstraintId id) {
  if (id >= bits_.size()) throw ContractError("constraint id " + std::to_string(id) + " out of range");
  bits_.reset(id);
}

bool ConstraintSet::is_subset_of(const ConstraintSet& other) const {
  require_same_universe(universe(), other.universe());
  return bits_.is_subset_of(other.bits_);
}

ConstraintSet& ConstraintSet::operator|=(const ConstraintSet& other) {
  require_same_universe(universe(), other.universe());
  bits_ |= other.bits_;
  return *this;
}

ConstraintSet& ConstraintSet::operator&=(const ConstraintSet& other) {
  require_same_universe(universe(), other.universe());
  bits_ &= other.bits_;
  return *this;
}

ConstraintSet& ConstraintSet::operator-=(const ConstraintSet& other) {
  require_same_universe(universe(), other.universe());
  bits_ -= other.bits_;
  return *this;
}

std::vector<ConstraintId> ConstraintSet::ids() const {
  std::vector<ConstraintId> out;
  out.reserve(size());
  for_each([&](ConstraintId id) { out.push_back(id); });
  return out;
}

}  // namespace mucx
