// mucx: command-line front end for minimal unsatisfiable core extraction.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mucx/bench.hpp"
#include "mucx/error.hpp"
#include "mucx/extractor.hpp"
#include "mucx/io.hpp"
#include "mucx/oracle.hpp"
#include "mucx/solver.hpp"

namespace fs = std::filesystem;
using namespace mucx;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;

std::string braces(const Network& net, const ConstraintSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& n : net.names_of(s)) {
    if (!first) out += ',';
    out += n;
    first = false;
  }
  return out + "}";
}

std::string show(const Network& net, const Assignment& a) {
  std::string out;
  for (VarIndex x = 0; x < net.num_variables(); ++x) {
    if (x) out += ' ';
    out += net.variable(x).name + "=" + std::to_string(a[x]);
  }
  return out;
}

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::ceil(seconds * 1000)));
}

void append_stats(const fs::path& file, const io::StatsRecord& rec) {
  const bool fresh = !fs::exists(file) || fs::file_size(file) == 0;
  std::ofstream out(file, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  if (fresh) out << io::csv_header() << '\n';
  out << io::csv_row(rec) << '\n';
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
}

// ---------------------------------------------------------------------------

struct SolveOpts {
  std::string file;
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> timeout;
};

int cmd_solve(const SolveOpts& o) {
  auto net = io::load_network(o.file);
  solver::SolverParams p;
  p.budget.max_nodes = o.max_nodes;
  if (o.timeout) p.budget.deadline = Clock::now() + to_ms(*o.timeout);
  auto r = solver::solve(net, p);
  switch (r.outcome) {
    case solver::Outcome::Sat:
      std::cout << "SAT\n" << show(net, r.assignment) << '\n';
      break;
    case solver::Outcome::Unsat:
      std::cout << "UNSAT\nactive " << braces(net, r.active) << '\n';
      break;
    case solver::Outcome::BudgetExhausted:
      std::cout << "UNKNOWN (budget exhausted)\n";
      return kExitTimeout;
  }
  std::cout << "nodes " << r.stats.nodes << '\n';
  return kExitOk;
}

struct MucOpts {
  std::string file;
  std::string method = "dc-lstc";
  std::uint64_t seed = 1;
  std::int64_t nbit = 10000;
  std::int64_t bonus = 10000;
  std::string escape = "random-walk";
  double noise = 0.3;
  std::optional<double> timeout;
  std::optional<std::uint64_t> max_nodes;
  bool share_weights = false;
  std::string stats;
};

int cmd_muc(const MucOpts& o) {
  auto net = io::load_network(o.file);
  extractor::ExtractParams p;
  p.method = *extractor::parse_method(o.method);
  p.seed = o.seed;
  p.lstc.initial_iterations = o.nbit;
  p.lstc.bonus = o.bonus;
  p.lstc.escape = o.escape == "rnovelty" ? lstc::Escape::RNovelty : lstc::Escape::RandomWalk;
  p.lstc.noise = o.noise;
  if (o.timeout) p.timeout = to_ms(*o.timeout);
  p.max_nodes_per_call = o.max_nodes;
  p.share_weights = o.share_weights;
  auto r = extractor::extract_muc(net, p);

  io::StatsRecord rec;
  rec.instance = fs::path(o.file).filename().string();
  rec.constraints = net.num_constraints();
  rec.variables = net.num_variables();
  rec.prep_size = r.prep_size;
  rec.method = o.method;
  rec.seed = o.seed;
  rec.time_ms = std::chrono::duration<double, std::milli>(r.elapsed).count();
  rec.muc_size = r.muc.size();
  rec.mac_calls = r.mac_calls;
  rec.by_rotation = r.by_rotation;
  rec.by_ls = r.by_ls;
  rec.status = r.status == extractor::Status::Ok        ? bench::kOk
               : r.status == extractor::Status::Timeout ? bench::kTimeout
                                                        : bench::kSat;
  if (!o.stats.empty()) append_stats(o.stats, rec);

  if (r.status == extractor::Status::Satisfiable) {
    std::cerr << "error: " << o.file << " is satisfiable; a MUC needs an unsatisfiable network\n";
    return kExitFailed;
  }
  if (r.status == extractor::Status::Timeout)
    std::cout << "PARTIAL " << braces(net, r.muc) << " (timeout: unverified, not a core)\n";
  else
    std::cout << "MUC " << braces(net, r.muc) << '\n';

  char time[32];
  std::snprintf(time, sizeof time, "%.3f", rec.time_ms);
  std::cout << "  method       " << rec.method << "\n  seed         " << rec.seed << "\n  |C|          "
            << rec.constraints << "\n  |X|          " << rec.variables << "\n  prep_size    " << rec.prep_size
            << "\n  muc_size     " << rec.muc_size << "\n  mac_calls    " << rec.mac_calls
            << "\n  by_rotation  " << rec.by_rotation << "\n  by_ls        " << rec.by_ls << "\n  time_ms      "
            << time << "\n  status       " << rec.status << '\n';
  return r.status == extractor::Status::Ok ? kExitOk : kExitTimeout;
}

struct VerifyOpts {
  std::string file;
  std::vector<std::string> muc;
  std::uint64_t bound = oracle::kDefaultBound;
};

int cmd_verify(const VerifyOpts& o) {
  auto net = io::load_network(o.file);
  ConstraintSet s(net.num_constraints());
  for (const auto& n : o.muc) {
    auto c = net.find_constraint(n);
    if (!c) {
      std::cerr << "error: no constraint named '" << n << "' in " << o.file << '\n';
      return kExitUsage;
    }
    s.insert(*c);
  }
  if (auto sol = oracle::brute_sat(net, s, o.bound)) {
    std::cout << "NOT A MUC " << braces(net, s) << ": satisfiable, e.g. " << show(net, *sol) << '\n';
    return kExitFailed;
  }
  for (ConstraintId c : s.ids()) {
    auto smaller = s;
    smaller.erase(c);
    if (!oracle::brute_sat(net, smaller, o.bound)) {
      std::cout << "NOT A MUC " << braces(net, s) << ": still unsatisfiable without " << net.constraint(c).name()
                << '\n';
      return kExitFailed;
    }
  }
  std::cout << "MUC " << braces(net, s) << '\n';
  return kExitOk;
}

struct EnumerateOpts {
  std::string file;
  std::uint64_t bound = oracle::kDefaultBound;
};

int cmd_enumerate(const EnumerateOpts& o) {
  auto net = io::load_network(o.file);
  auto mucs = oracle::all_mucs(net, o.bound);
  std::cout << mucs.size() << " MUC(s)\n";
  for (const auto& m : mucs) std::cout << braces(net, m) << '\n';
  return kExitOk;
}

struct GenOpts {
  oracle::GeneratorParams g;
  std::string out;
};

int cmd_gen(const GenOpts& o) {
  auto net = oracle::generate(o.g);
  if (o.out.empty())
    std::cout << io::serialize_network(net);
  else
    io::save_network(net, o.out);
  return kExitOk;
}

struct BenchOpts {
  std::string dir;
  std::vector<std::string> methods = {"dc", "dc-mr", "dc-lstc"};
  std::uint64_t seeds = 1;
  std::optional<double> timeout;
  unsigned jobs = 0;
  bool certify = false;
  std::int64_t nbit = 10000;
  std::int64_t bonus = 10000;
  std::string csv, summary, cactus;
};

int cmd_bench(const BenchOpts& o) {
  bench::BenchParams p;
  p.methods.clear();
  for (const auto& m : o.methods) p.methods.push_back(*extractor::parse_method(m));
  p.seeds = o.seeds;
  if (o.timeout) p.timeout = to_ms(*o.timeout);
  p.jobs = o.jobs;
  p.certify = o.certify;
  p.extract.lstc.initial_iterations = o.nbit;
  p.extract.lstc.bonus = o.bonus;

  auto rows = bench::run(bench::list_instances(o.dir), p);
  std::string csv(io::csv_header());
  csv += '\n';
  bool failed = false;
  for (const auto& r : rows) {
    csv += io::csv_row(r) + '\n';
    failed |= r.status == bench::kNotMuc || r.status == bench::kError;
  }
  auto summary = bench::summarize(rows);
  std::ostream& report = o.csv.empty() ? std::cerr : std::cout;
  if (o.csv.empty())
    std::cout << csv;
  else
    write_text(o.csv, csv);
  report << bench::summary_csv(summary);
  if (!o.summary.empty()) write_text(o.summary, bench::summary_csv(summary));
  if (!o.cactus.empty()) write_text(o.cactus, bench::cactus_csv(summary));
  return failed ? kExitFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal unsatisfiable core extraction for constraint networks"};
  app.require_subcommand(1);
  int status = kExitOk;
  auto guarded = [&](auto fn) {
    return [&, fn] {
      try {
        status = fn();
      } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        status = kExitUsage;
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        status = kExitFailed;
      }
    };
  };
  const std::vector<std::string> methods = {"dc", "dc-mr", "dc-lstc"};

  SolveOpts solve;
  auto* s = app.add_subcommand("solve", "Decide satisfiability with the MAC solver");
  s->add_option("file", solve.file, "Network file")->required();
  s->add_option("--max-nodes", solve.max_nodes, "Node limit");
  s->add_option("--timeout", solve.timeout, "Seconds")->check(CLI::PositiveNumber);
  s->callback(guarded([&] { return cmd_solve(solve); }));

  MucOpts muc;
  auto* m = app.add_subcommand("muc", "Extract one minimal unsatisfiable core");
  m->add_option("file", muc.file, "Network file")->required();
  m->add_option("--method", muc.method, "dc, dc-mr or dc-lstc")->check(CLI::IsMember(methods))->capture_default_str();
  m->add_option("--seed", muc.seed, "Local search seed")->capture_default_str();
  m->add_option("--nbit", muc.nbit, "Initial local search iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
  m->add_option("--bonus", muc.bonus, "Iterations per discovery")->check(CLI::NonNegativeNumber)->capture_default_str();
  m->add_option("--escape", muc.escape, "random-walk or rnovelty")
      ->check(CLI::IsMember({"random-walk", "rnovelty"}))
      ->capture_default_str();
  m->add_option("--noise", muc.noise, "Escape noise")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  m->add_option("--timeout", muc.timeout, "Seconds for the whole extraction")->check(CLI::PositiveNumber);
  m->add_option("--max-nodes", muc.max_nodes, "Node limit per solver call");
  m->add_flag("--share-weights", muc.share_weights, "Let every solver call update the constraint ranking");
  m->add_option("--stats", muc.stats, "Append a CSV row to this file");
  m->callback(guarded([&] { return cmd_muc(muc); }));

  VerifyOpts verify;
  auto* v = app.add_subcommand("verify", "Check a constraint subset is a MUC by exhaustive search");
  v->add_option("file", verify.file, "Network file")->required();
  v->add_option("--muc", verify.muc, "Comma-separated constraint names")->required()->delimiter(',');
  v->add_option("--bound", verify.bound, "Largest search space to enumerate")->capture_default_str();
  v->callback(guarded([&] { return cmd_verify(verify); }));

  EnumerateOpts enumerate;
  auto* e = app.add_subcommand("enumerate", "List every MUC of a small network");
  e->add_option("file", enumerate.file, "Network file")->required();
  e->add_option("--bound", enumerate.bound, "Largest search space to enumerate")->capture_default_str();
  e->callback(guarded([&] { return cmd_enumerate(enumerate); }));

  GenOpts gen;
  auto* g = app.add_subcommand("gen", "Write a random binary network");
  g->add_option("--seed", gen.g.seed)->capture_default_str();
  g->add_option("--vars", gen.g.variables)->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--dom", gen.g.domain_size)->check(CLI::PositiveNumber)->capture_default_str();
  g->add_option("--density", gen.g.density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  g->add_flag("--unsat", gen.g.ensure_unsat, "Embed an unsatisfiable gadget");
  g->add_option("-o,--output", gen.out, "Output file (default stdout)");
  g->callback(guarded([&] { return cmd_gen(gen); }));

  BenchOpts bench;
  auto* b = app.add_subcommand("bench", "Run every method on every *.json file of a directory");
  b->add_option("dir", bench.dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
  b->add_option("--methods", bench.methods)->delimiter(',')->check(CLI::IsMember(methods));
  b->add_option("--seeds", bench.seeds, "Seeds 1..K per method")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--timeout", bench.timeout, "Seconds per extraction")->check(CLI::PositiveNumber);
  b->add_option("--jobs", bench.jobs, "Worker threads, 0 for all cores")->capture_default_str();
  b->add_flag("--certify", bench.certify, "Check small results with the exhaustive oracle");
  b->add_option("--nbit", bench.nbit)->check(CLI::NonNegativeNumber)->capture_default_str();
  b->add_option("--bonus", bench.bonus)->check(CLI::NonNegativeNumber)->capture_default_str();
  b->add_option("--csv", bench.csv, "Output CSV (default stdout)");
  b->add_option("--summary", bench.summary, "Per-method summary CSV");
  b->add_option("--cactus", bench.cactus, "Solved-instance curve CSV");
  b->callback(guarded([&] { return cmd_bench(bench); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return status;
}
