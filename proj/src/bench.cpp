#include "mucx/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <map>
#include <optional>
#include <thread>

#include "mucx/oracle.hpp"

namespace mucx::bench {

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
}

namespace {

struct Task {
  std::size_t instance;
  extractor::Method method;
  std::uint64_t seed;
};

io::StatsRecord run_one(const Network& net, const std::string& name, const Task& task, const BenchParams& params) {
  extractor::ExtractParams p = params.extract;
  p.method = task.method;
  p.seed = task.seed;
  p.timeout = params.timeout;
  auto r = extractor::extract_muc(net, p);

  io::StatsRecord rec;
  rec.instance = name;
  rec.constraints = net.num_constraints();
  rec.variables = net.num_variables();
  rec.prep_size = r.prep_size;
  rec.method = extractor::method_name(task.method);
  rec.seed = task.seed;
  rec.time_ms = std::chrono::duration<double, std::milli>(r.elapsed).count();
  rec.muc_size = r.muc.size();
  rec.mac_calls = r.mac_calls;
  rec.by_rotation = r.by_rotation;
  rec.by_ls = r.by_ls;
  switch (r.status) {
    case extractor::Status::Ok: rec.status = kOk; break;
    case extractor::Status::Timeout: rec.status = kTimeout; break;
    case extractor::Status::Satisfiable: rec.status = kSat; break;
  }
  if (params.certify && r.ok()) {
    try {
      if (!oracle::is_muc(net, r.muc)) rec.status = kNotMuc;
    } catch (const BoundExceeded&) {
      // Too large to certify; the row stands as reported.
    }
  }
  return rec;
}

}  // namespace

std::vector<io::StatsRecord> run(const std::vector<std::filesystem::path>& instances, const BenchParams& params) {
  std::vector<std::optional<Network>> nets(instances.size());
  std::vector<std::string> names(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    names[i] = instances[i].filename().string();
    try {
      nets[i] = io::load_network(instances[i]);
    } catch (const Error& e) {
      std::fprintf(stderr, "%s: %s\n", instances[i].string().c_str(), e.what());
    }
  }

  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (auto m : params.methods)
      for (std::uint64_t s = 1; s <= params.seeds; ++s) tasks.push_back({i, m, s});

  std::vector<io::StatsRecord> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      if (!nets[task.instance]) {
        io::StatsRecord rec;
        rec.instance = names[task.instance];
        rec.method = extractor::method_name(task.method);
        rec.seed = task.seed;
        rec.status = kError;
        rows[t] = rec;
        continue;
      }
      rows[t] = run_one(*nets[task.instance], names[task.instance], task, params);
    }
  };

  unsigned jobs = params.jobs ? params.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<MethodSummary> summarize(const std::vector<io::StatsRecord>& rows) {
  std::vector<MethodSummary> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> samples;
  for (const auto& r : rows) {
    auto [it, fresh] = index.emplace(r.method, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().method = r.method;
    }
    MethodSummary& s = out[it->second];
    ++s.rows;
    if (r.status != kOk) continue;
    ++s.solved;
    s.solved_times_ms.push_back(r.time_ms);
    auto& [fractions, calls] = samples[r.method];
    if (r.muc_size > 0) fractions.push_back(static_cast<double>(r.by_rotation + r.by_ls) / r.muc_size);
    calls.push_back(static_cast<double>(r.mac_calls));
  }
  for (auto& s : out) {
    std::sort(s.solved_times_ms.begin(), s.solved_times_ms.end());
    s.median_booster_fraction = median(samples[s.method].first);
    s.median_mac_calls = median(samples[s.method].second);
  }
  return out;
}

std::string summary_csv(const std::vector<MethodSummary>& summary) {
  std::string out = "method,solved,rows,median_mac_calls,median_booster_fraction\n";
  char buf[256];
  for (const auto& s : summary) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.1f,%.3f\n", s.method.c_str(), s.solved, s.rows,
                  s.median_mac_calls, s.median_booster_fraction);
    out += buf;
  }
  return out;
}

std::string cactus_csv(const std::vector<MethodSummary>& summary) {
  std::string out = "method,rank,time_ms\n";
  char buf[256];
  for (const auto& s : summary)
    for (std::size_t k = 0; k < s.solved_times_ms.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.3f\n", s.method.c_str(), k + 1, s.solved_times_ms[k]);
      out += buf;
    }
  return out;
}

}  // namespace mucx::bench
