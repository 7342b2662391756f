// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mucx/extractor.hpp"
#include "mucx/io.hpp"
#include "mucx/oracle.hpp"
#include "mucx/solver.hpp"

namespace fs = std::filesystem;
using namespace mucx;
using extractor::Method;
using Seconds = std::chrono::duration<double>;

namespace {

const std::string kData = MUCX_TEST_DATA;
const std::string kCli = MUCX_CLI;
constexpr Method kMethods[] = {Method::Dc, Method::DcMr, Method::DcLstc};

struct Verdict {
  int id;
  std::string title;
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& why) {
    if (ok) return;
    if (pass) detail = why;  // keep the first failure
    pass = false;
  }
};

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_time(const std::string& csv) {
  std::stringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() > 6) cells.erase(cells.begin() + 6);
    for (const auto& c : cells) out += c + ",";
    out += "\n";
  }
  return out;
}

std::string braces(const Network& net, const ConstraintSet& s) {
  std::string out = "{";
  for (const auto& n : net.names_of(s)) out += (out.size() > 1 ? "," : "") + n;
  return out + "}";
}

extractor::ExtractParams params_for(Method m, std::uint64_t seed) {
  extractor::ExtractParams p;
  p.method = m;
  p.seed = seed;
  return p;
}

// Guaranteed-unsat generated networks: 4..8 variables, domains 2..4.
std::vector<Network> unsat_corpus(std::size_t n) {
  std::vector<Network> out;
  for (std::size_t k = 0; k < n; ++k) {
    oracle::GeneratorParams g;
    g.seed = 1000 + k;
    g.variables = 4 + k % 5;
    g.domain_size = 2 + (k / 5) % 3;
    g.density = 0.2 + 0.1 * static_cast<double>(k % 4);
    g.ensure_unsat = true;
    out.push_back(oracle::generate(g));
  }
  return out;
}

std::vector<Network> mixed_corpus(std::size_t n) {
  std::vector<Network> out;
  for (std::size_t k = 0; k < n; ++k) {
    oracle::GeneratorParams g;
    g.seed = 5000 + k;
    g.variables = 3 + k % 6;
    g.domain_size = 2 + (k / 6) % 3;
    g.density = 0.2 + 0.15 * static_cast<double>(k % 5);
    out.push_back(oracle::generate(g));
  }
  return out;
}

Verdict golden_example1() {
  Verdict v{1, "Golden Example 1: every method returns {c4,c5,c6} in < 1 s; A is a transition assignment for c4"};
  auto net = io::load_network(kData + "/fig1.json");
  auto expected = net.set_of_names({"c4", "c5", "c6"});
  for (auto m : kMethods)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto r = extractor::extract_muc(net, params_for(m, seed));
      const std::string tag = extractor::method_name(m) + " seed " + std::to_string(seed);
      v.expect(r.ok(), tag + ": status not OK");
      v.expect(r.muc == expected, tag + ": got " + braces(net, r.muc));
      v.expect(r.elapsed < std::chrono::seconds(1), tag + ": took " + std::to_string(Seconds(r.elapsed).count()) + " s");
    }
  Assignment a({2, 0, 1, 2, 4});
  auto c4 = *net.find_constraint("c4");
  v.expect(violated_set(net, a) == net.set_of({c4}), "A does not falsify exactly c4");
  v.expect(transition_check(net, a) == c4, "transition_check(A) is not c4");
  v.expect(oracle::is_transition_constraint(net, net.all(), c4), "oracle: c4 is not a transition constraint");
  return v;
}

Verdict golden_example2() {
  Verdict v{2, "Golden Example 2: enumerate gives exactly {c1,c2,c3},{c3,c4,c5}; every method returns one of them"};
  auto r = run_cli("enumerate " + kData + "/fig2.json");
  v.expect(r.code == 0, "enumerate exit " + std::to_string(r.code));
  v.expect(r.out == "2 MUC(s)\n{c1,c2,c3}\n{c3,c4,c5}\n", "enumerate printed: " + r.out);
  auto net = io::load_network(kData + "/fig2.json");
  auto mucs = oracle::all_mucs(net);
  v.expect(mucs.size() == 2 && mucs[0] == net.set_of_names({"c1", "c2", "c3"}) &&
               mucs[1] == net.set_of_names({"c3", "c4", "c5"}),
           "oracle disagrees with the expected pair");
  v.expect(!oracle::is_muc(net, net.set_of_names({"c1", "c2", "c4", "c5"})), "{c1,c2,c4,c5} certified");
  for (auto m : kMethods)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto x = extractor::extract_muc(net, params_for(m, seed));
      v.expect(x.ok() && std::find(mucs.begin(), mucs.end(), x.muc) != mucs.end(),
               extractor::method_name(m) + " seed " + std::to_string(seed) + ": got " + braces(net, x.muc));
    }
  return v;
}

// Criteria 3 and 4 share the same instrumented runs.
std::pair<Verdict, Verdict> corpus_runs(const std::vector<Network>& corpus) {
  Verdict cert{3, "MUC certification: " + std::to_string(corpus.size()) +
                      " generated unsat instances x 3 methods x 3 seeds, every result passes is_muc"};
  Verdict sound{4, "Transition soundness: every constraint added by rotation or LSTC was a transition constraint"};
  std::size_t runs = 0, checked = 0;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const Network& net = corpus[k];
    cert.expect(oracle::search_space(net) <= oracle::kDefaultBound, "instance beyond the oracle bound");
    for (auto m : kMethods)
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        extractor::Observer obs;
        obs.on_insert = [&](ConstraintId c, extractor::Provenance how, const ConstraintSet& current, const Assignment&) {
          if (how == extractor::Provenance::Dichotomy) return;
          ++checked;
          if (!oracle::is_transition_constraint(net, current, c)) {
            sound.expect(false, "instance " + std::to_string(k) + " " + extractor::method_name(m) + ": " +
                                    net.constraint(c).name() + " is not a transition constraint");
          }
        };
        auto r = extractor::extract_muc(net, params_for(m, seed), obs);
        ++runs;
        const bool ok = r.ok() && oracle::is_muc(net, r.muc);
        if (!ok) {
          cert.expect(false, "instance " + std::to_string(k) + " " + extractor::method_name(m) + " seed " +
                                 std::to_string(seed) + ": " + braces(net, r.muc) + " is not a MUC");
        }
      }
  }
  cert.expect(corpus.size() >= 200, "corpus too small");
  if (cert.pass) cert.detail = std::to_string(runs) + " runs, 0 failures";
  sound.expect(checked > 0, "no booster insertion was observed");
  if (sound.pass) sound.detail = std::to_string(checked) + " booster insertions checked, 0 unsound";
  return {cert, sound};
}

Verdict solver_agreement(const std::vector<Network>& unsat, const std::vector<Network>& mixed) {
  Verdict v{5, "Solver/oracle agreement: MAC verdicts equal brute_sat on the small-instance corpus"};
  std::size_t n = 0, sat = 0;
  auto check = [&](const Network& net, const std::string& tag) {
    auto r = solver::solve(net);
    auto truth = oracle::brute_sat(net);
    ++n;
    sat += truth.has_value();
    v.expect(r.outcome != solver::Outcome::BudgetExhausted, tag + ": solver gave no verdict");
    v.expect(r.sat() == truth.has_value(), tag + ": verdicts differ");
    if (r.sat()) v.expect(violated_set(net, r.assignment).empty(), tag + ": solver returned a non-solution");
  };
  for (std::size_t k = 0; k < unsat.size(); ++k) check(unsat[k], "unsat instance " + std::to_string(k));
  for (std::size_t k = 0; k < mixed.size(); ++k) check(mixed[k], "mixed instance " + std::to_string(k));
  v.expect(sat > 0 && sat < n, "corpus lacks one of the verdicts");
  if (v.pass) v.detail = std::to_string(n) + " instances, " + std::to_string(sat) + " satisfiable";
  return v;
}

Verdict booster_effectiveness() {
  Verdict v{6, "Booster effectiveness on clique fixtures: median LS share >= 0.5, median mac_calls dc-lstc <= dc"};
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  for (const char* file : {"k6_3.json", "k8_3.json"}) {
    auto net = io::load_network(kData + "/" + file);
    std::vector<double> share, calls_lstc, calls_dc;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto l = extractor::extract_muc(net, params_for(Method::DcLstc, seed));
      auto d = extractor::extract_muc(net, params_for(Method::Dc, seed));
      v.expect(l.ok() && d.ok(), std::string(file) + ": extraction failed");
      v.expect(oracle::is_muc(net, l.muc) && oracle::is_muc(net, d.muc), std::string(file) + ": result not a MUC");
      share.push_back(l.muc.empty() ? 0.0 : static_cast<double>(l.by_ls) / l.muc.size());
      calls_lstc.push_back(static_cast<double>(l.mac_calls));
      calls_dc.push_back(static_cast<double>(d.mac_calls));
    }
    auto median = [](std::vector<double> x) {
      std::sort(x.begin(), x.end());
      return x.size() % 2 ? x[x.size() / 2] : (x[x.size() / 2 - 1] + x[x.size() / 2]) / 2;
    };
    const double s = median(share), cl = median(calls_lstc), cd = median(calls_dc);
    v.expect(s >= 0.5, std::string(file) + ": median LS share " + std::to_string(s));
    v.expect(cl <= cd, std::string(file) + ": median mac_calls " + std::to_string(cl) + " > " + std::to_string(cd));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s: LS share %.2f, mac_calls %.0f vs %.0f", detail.empty() ? "" : "; ", file, s,
                  cl, cd);
    detail += buf;
  }
  const double secs = Seconds(std::chrono::steady_clock::now() - start).count();
  v.expect(secs < 300, "took " + std::to_string(secs) + " s");
  if (v.pass) v.detail = detail;
  return v;
}

Verdict determinism(const fs::path& tmp) {
  Verdict v{7, "Determinism: repeated CLI runs give identical stats rows apart from time_ms"};
  for (const char* file : {"fig1.json", "fig2.json", "k6_3.json", "k8_3.json"})
    for (const char* m : {"dc", "dc-mr", "dc-lstc"})
      for (int seed : {1, 7}) {
        std::string rows[2];
        for (int k = 0; k < 2; ++k) {
          auto csv = tmp / ("det" + std::to_string(k) + ".csv");
          fs::remove(csv);
          auto r = run_cli("muc " + kData + "/" + file + " --method " + m + " --seed " + std::to_string(seed) +
                           " --stats " + csv.string());
          v.expect(r.code == 0, std::string("muc ") + file + " exit " + std::to_string(r.code));
          rows[k] = without_time(slurp(csv));
        }
        v.expect(!rows[0].empty() && rows[0] == rows[1], std::string(file) + " " + m + ": rows differ");
      }
  fs::create_directories(tmp / "bench");
  for (const char* file : {"fig1.json", "fig2.json", "k6_3.json"})
    fs::copy_file(kData + "/" + file, tmp / "bench" / file, fs::copy_options::overwrite_existing);
  std::string bench[2];
  for (int k = 0; k < 2; ++k) {
    auto csv = tmp / ("bench" + std::to_string(k) + ".csv");
    auto r = run_cli("bench " + (tmp / "bench").string() + " --seeds 2 --jobs " + std::to_string(k + 1) + " --csv " +
                     csv.string());
    v.expect(r.code == 0, "bench exit " + std::to_string(r.code));
    bench[k] = without_time(slurp(csv));
  }
  v.expect(bench[0] == bench[1], "bench rows differ");
  return v;
}

Verdict degenerate(const fs::path& tmp) {
  Verdict v{8, "Degenerate input: satisfiable muc input exits 1 with a diagnostic; timeout gives TO with unverified output"};
  auto sat = tmp / "sat.json";
  std::ofstream(sat) << R"J({"format-version": 1,
  "variables": [{"name": "x", "domain": [1, 2]}, {"name": "y", "domain": [1, 2]}],
  "constraints": [{"name": "c1", "scope": ["x", "y"], "expr": "ne(x, y)"}]})J";
  auto csv = tmp / "degenerate.csv";
  fs::remove(csv);
  auto r = run_cli("muc " + sat.string() + " --stats " + csv.string());
  v.expect(r.code == 1, "satisfiable input exit " + std::to_string(r.code));
  v.expect(r.out.find("satisfiable") != std::string::npos, "no diagnostic: " + r.out);
  v.expect(slurp(csv).find(",SAT\n") != std::string::npos, "stats row not SAT");

  fs::remove(csv);
  r = run_cli("muc " + kData + "/k8_3.json --timeout 0.001 --nbit 100000000 --stats " + csv.string());
  v.expect(r.code == 3, "timeout exit " + std::to_string(r.code));
  v.expect(r.out.rfind("PARTIAL {", 0) == 0 && r.out.find("unverified") != std::string::npos,
           "timeout output not flagged: " + r.out);
  v.expect(slurp(csv).find(",TO\n") != std::string::npos, "stats row not TO");

  extractor::ExtractParams p;
  p.timeout = std::chrono::milliseconds(0);
  auto x = extractor::extract_muc(io::load_network(kData + "/k8_3.json"), p);
  v.expect(x.status == extractor::Status::Timeout, "library timeout not reported");
  return v;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const fs::path tmp = fs::temp_directory_path() / ("mucx_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);

  std::vector<Verdict> verdicts;
  auto guarded = [&](int id, const std::string& title, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      verdicts.push_back(Verdict{id, title, false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "Golden Example 1", [&] { verdicts.push_back(golden_example1()); });
  guarded(2, "Golden Example 2", [&] { verdicts.push_back(golden_example2()); });
  const auto unsat = unsat_corpus(240);
  const auto mixed = mixed_corpus(200);
  guarded(3, "MUC certification / transition soundness", [&] {
    auto [cert, sound] = corpus_runs(unsat);
    verdicts.push_back(cert);
    verdicts.push_back(sound);
  });
  guarded(5, "Solver/oracle agreement", [&] { verdicts.push_back(solver_agreement(unsat, mixed)); });
  guarded(6, "Booster effectiveness", [&] { verdicts.push_back(booster_effectiveness()); });
  guarded(7, "Determinism", [&] { verdicts.push_back(determinism(tmp)); });
  guarded(8, "Degenerate input", [&] { verdicts.push_back(degenerate(tmp)); });
  fs::remove_all(tmp);

  std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  int failed = 0;
  for (const auto& v : verdicts) {
    std::printf("[%s] %d. %s", v.pass ? "PASS" : "FAIL", v.id, v.title.c_str());
    if (!v.detail.empty()) std::printf(" (%s)", v.detail.c_str());
    std::printf("\n");
    failed += !v.pass;
  }
  std::printf("acceptance: %zu criteria, %d failed, %.1f s\n", verdicts.size(), failed,
              Seconds(std::chrono::steady_clock::now() - start).count());
  return failed ? 1 : 0;
}
