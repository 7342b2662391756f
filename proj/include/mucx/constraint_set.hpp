#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace mucx {

using ConstraintId = std::uint32_t;

/// Subset of the constraint ids of one network. Ids are dense, so the set is
/// a bitset over the network's constraint universe.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::size_t universe) : bits_(universe) {}

  static ConstraintSet full(std::size_t universe) {
    ConstraintSet s(universe);
    s.bits_.set();
    return s;
  }
  static ConstraintSet of(std::size_t universe, std::initializer_list<ConstraintId> ids) {
    ConstraintSet s(universe);
    for (auto id : ids) s.insert(id);
    return s;
  }
  template <class Range>
  static ConstraintSet from(std::size_t universe, const Range& ids) {
    ConstraintSet s(universe);
    for (auto id : ids) s.insert(static_cast<ConstraintId>(id));
    return s;
  }

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  bool contains(ConstraintId id) const { return id < bits_.size() && bits_.test(id); }
  void insert(ConstraintId id);
  void erase(ConstraintId id);

  bool is_subset_of(const ConstraintSet& other) const;
  bool is_proper_subset_of(const ConstraintSet& other) const {
    return is_subset_of(other) && size() < other.size();
  }

  ConstraintSet& operator|=(const ConstraintSet& other);
  ConstraintSet& operator&=(const ConstraintSet& other);
  ConstraintSet& operator-=(const ConstraintSet& other);
  friend ConstraintSet operator|(ConstraintSet a, const ConstraintSet& b) { return a |= b; }
  friend ConstraintSet operator&(ConstraintSet a, const ConstraintSet& b) { return a &= b; }
  friend ConstraintSet operator-(ConstraintSet a, const ConstraintSet& b) { return a -= b; }

  /// Members in increasing id order.
  std::vector<ConstraintId> ids() const;

  template <class F>
  void for_each(F&& f) const {
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i))
      f(static_cast<ConstraintId>(i));
  }

  bool operator==(const ConstraintSet& other) const { return bits_ == other.bits_; }
  bool operator!=(const ConstraintSet& other) const { return !(*this == other); }
  /// Lexicographic order over the sorted member lists.
  bool operator<(const ConstraintSet& other) const { return ids() < other.ids(); }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;
  Bits bits_;
};

}  // namespace mucx
