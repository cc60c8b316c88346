// One line per acceptance criterion: "criterion K: PASS|FAIL <title> | <detail>".
// Usage: qhflux_acceptance [--only K] [--seed S] [--threads T]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "qhflux/harness.hpp"
#include "qhflux/oracle.hpp"
#include "qhflux/partition.hpp"

using namespace qhflux;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// every row whose case_id starts with one of the prefixes must pass
Outcome judge(const VerificationReport& rep, const std::vector<std::string>& prefixes = {""}) {
  std::size_t rows = 0, failed = 0;
  double worst = 0.0;
  std::string first_failure;
  for (const auto& r : rep.rows()) {
    bool match = false;
    for (const auto& p : prefixes) match = match || r.case_id.rfind(p, 0) == 0;
    if (!match) continue;
    ++rows;
    if (std::isfinite(r.ratio)) worst = std::max(worst, r.ratio);
    if (!r.pass) {
      ++failed;
      if (first_failure.empty())
        first_failure = r.case_id + " [" + r.quantity + "] measured " + format_double(r.measured) + " vs " +
                        format_double(r.mode == RowMode::bound ? r.bound : r.predicted);
    }
  }
  std::ostringstream os;
  os << rows - failed << "/" << rows << " rows pass, worst ratio " << worst;
  if (!first_failure.empty()) os << "; first failure: " << first_failure;
  return {rows > 0 && failed == 0, os.str()};
}

class Runner {
 public:
  explicit Runner(SuiteOptions o) : o_(o) {}

  const VerificationReport& oracle() {
    if (!oracle_) {
      const auto t0 = Clock::now();
      OracleSuiteParams p;
      p.charpoly_samples = 20000;
      p.mcmc_sweeps = 100000;
      oracle_ = run_oracle_suite(p, o_);
      oracle_seconds_ = seconds_since(t0);
    }
    return *oracle_;
  }
  double oracle_seconds() const { return oracle_seconds_; }
  const SuiteOptions& options() const { return o_; }

 private:
  SuiteOptions o_;
  std::optional<VerificationReport> oracle_;
  double oracle_seconds_ = 0.0;
};

Outcome partition_identity(Runner& run) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  long cases = 0;
  for (long N = 1; N <= 3; ++N)
    for (std::size_t n = 1; n <= 2; ++n)
      for (double b : {1.0, static_cast<double>(N), 2.5})
        for (int c = 0; c < 20; ++c) {
          std::mt19937_64 rng(derive_seed(run.options().seed, 9000000 + N * 10000 + n * 1000 + c * 10 + (b == 2.5 ? 1 : b == 1.0 ? 0 : 2)));
          HoleConfig cfg{std::vector<cplx>(n), N, b};
          for (auto& w : cfg.w) w = sample_disk(rng, 1.2);
          worst = std::max(worst, std::abs(std::expm1(log_partition(cfg).log_value - partition_exact(cfg))));
          ++cases;
        }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << cases << " configs, max relative deviation " << worst << ", " << secs << " s";
  return {worst <= 1e-10 && secs < 10.0, os.str()};
}

Outcome charpoly(Runner& run) {
  Outcome o = judge(run.oracle(), {"oracle-charpoly"});
  o.pass = o.pass && run.oracle_seconds() < 60.0;
  o.detail += ", oracle suite " + format_double(std::round(run.oracle_seconds() * 10) / 10) + " s";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(Runner&)> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "exact partition identity", partition_identity},
      {2, "reproducing-kernel identities",
       [](Runner& r) { return judge(run_identity_suite({}, r.options())); }},
      {3, "kernel asymptotics: tail certificate and decay slope",
       [](Runner& r) { return judge(run_kernel_suite({}, r.options())); }},
      {4, "Upsilon regime asymptotics", [](Runner& r) { return judge(run_upsilon_suite({}, r.options())); }},
      {5, "potential asymptotics and correction profiles",
       [](Runner& r) { return judge(run_potential_suite({}, r.options())); }},
      {6, "cross-method field consistency",
       [](Runner& r) { return judge(run_consistency_suite({}, r.options())); }},
      {7, "global and droplet bounds", [](Runner& r) { return judge(run_global_suite({}, r.options())); }},
      {8, "correction fields", [](Runner& r) { return judge(run_correction_suite(r.options())); }},
      {9, "characteristic-polynomial moment", charpoly},
      {10, "plasma MCMC radial fidelity", [](Runner& r) { return judge(r.oracle(), {"oracle-mcmc-radial"}); }},
      {11, "energy identity", [](Runner& r) { return judge(r.oracle(), {"oracle-energy"}); }},
      {12, "Slater density and delta operator",
       [](Runner& r) { return judge(r.oracle(), {"oracle-slater", "oracle-delta"}); }},
  };
  return list;
}

int usage() {
  std::cerr << "usage: qhflux_acceptance [--only K] [--seed S] [--threads T]\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  SuiteOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (i + 1 >= argc) return usage();
    const char* v = argv[++i];
    if (a == "--only")
      only = std::atoi(v);
    else if (a == "--seed")
      opts.seed = std::strtoull(v, nullptr, 10);
    else if (a == "--threads")
      opts.threads = static_cast<unsigned>(std::atoi(v));
    else
      return usage();
  }
  if (only < 0 || only > static_cast<int>(criteria().size())) return usage();

  Runner runner(opts);
  int failures = 0;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.check(runner);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << " | " << o.detail
              << " (" << std::round(seconds_since(t0) * 10) / 10 << " s)" << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
