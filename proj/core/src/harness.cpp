#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "qhflux/harness.hpp"
#include "qhflux/kernel.hpp"
#include "qhflux/oracle.hpp"
#include "qhflux/partition.hpp"
#include "qhflux/plasma.hpp"
#include "qhflux/potentials.hpp"

namespace qhflux {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t case_id) {
  return splitmix64(splitmix64(seed) ^ (case_id * 0xd1342543de82ef95ULL + 1));
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QHFLUX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned t = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (t <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < t; ++k)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!err) err = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

cplx sample_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = r * std::sqrt(u(rng));
  return std::polar(rho, 2.0 * kPi * u(rng));
}

HoleConfig sample_config(std::mt19937_64& rng, long N, std::size_t n, RegimeKind target,
                         const RegimeClassifier& classifier, int max_tries) {
  const double d = classifier.delta(N);
  const double R = 1.0 - d;
  const double s_min = std::pow(static_cast<double>(N), -0.5 * (1.0 + classifier.gamma));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HoleConfig cfg;
  cfg.N = N;
  cfg.b = static_cast<double>(N);
  for (int t = 0; t < max_tries; ++t) {
    cfg.w.assign(n, cplx{0.0, 0.0});
    for (auto& y : cfg.w) y = sample_disk(rng, R);
    const auto near = [&](std::size_t from, double lo, double hi) {
      const double s = lo * std::pow(hi / lo, u(rng));
      return cfg.w[from] + std::polar(s, 2.0 * kPi * u(rng));
    };
    switch (target) {
      case RegimeKind::single_merging:
        if (n < 2) throw UsageError("single merging needs two tracers");
        cfg.w[1] = near(0, s_min, 2.0 * d);
        break;
      case RegimeKind::remainder:
        if (n >= 3) {
          cfg.w[1] = near(0, s_min, 2.0 * d);
          cfg.w[2] = near(u(rng) < 0.5 ? 0 : 1, s_min, 2.0 * d);
        } else if (n == 2) {
          cfg.w[1] = near(0, 0.2 * s_min, s_min);
        }
        break;
      case RegimeKind::outside_droplet:
        cfg.w[0] = std::polar(R + d * u(rng), 2.0 * kPi * u(rng));
        break;
      case RegimeKind::no_merging:
        break;
    }
    if (classifier.classify(cfg).kind == target) return cfg;
  }
  throw ResourceError("sample_config: no configuration found in the requested regime");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("loglog_slope needs two or more points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

ReportRow base_row(const std::string& id, long N, long n, const SuiteOptions& o, const std::string& regime,
                   const std::string& quantity) {
  ReportRow r;
  r.case_id = id;
  r.N = N;
  r.n = n;
  r.kappa = o.kappa;
  r.gamma = o.gamma;
  r.regime = regime;
  r.quantity = quantity;
  return r;
}

double vnorm(const Vec2& a) { return std::hypot(a[0], a[1]); }
Vec2 vsub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

std::string tag(const std::string& prefix, long a) { return prefix + std::to_string(a); }

const std::vector<DerivOrder>& orders_of(int total) {
  static const std::vector<DerivOrder> o0{DerivOrder{{0, 0, 0, 0}}};
  static const std::vector<DerivOrder> o1{DerivOrder{{0, 1, 0, 0}}, DerivOrder{{0, 0, 1, 0}}};
  static const std::vector<DerivOrder> o2{DerivOrder{{0, 1, 1, 0}}, DerivOrder{{0, 2, 0, 0}}};
  return total == 0 ? o0 : (total == 1 ? o1 : o2);
}

}  // namespace

VerificationReport run_kernel_suite(const KernelSuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("kernel");
  const RegimeClassifier cl{o.kappa, o.gamma};
  const int orders = std::min(p.max_order, 2) + 1;
  struct PerN {
    double max_bound_ratio = 0.0;
    std::vector<double> sup;  // per |alpha|
    double diag_dev = 0.0;
    double diag_scale = 0.0;
  };
  std::vector<PerN> res(p.Ns.size());
  parallel_for(p.Ns.size(), o.threads, [&](std::size_t t) {
    const long N = p.Ns[t];
    const KernelSpec spec{static_cast<double>(N), N + p.n};
    const double R = 1.0 - cl.delta(N);
    PerN r;
    r.sup.assign(orders, 0.0);
    for (int i = 0; i < p.samples; ++i) {
      // the same unit-disk points for every N
      std::mt19937_64 rng(derive_seed(o.seed, static_cast<std::uint64_t>(i)));
      const cplx z = R * sample_disk(rng, 1.0), w = R * sample_disk(rng, 1.0);
      const double diff = std::exp(kernel_tail(spec, z, w).log_mag);
      const double lb = log_kernel_tail_bound(static_cast<double>(N), z, w);
      r.max_bound_ratio = std::max(r.max_bound_ratio, std::exp(std::log(diff) - lb));
      r.sup[0] = std::max(r.sup[0], diff);
      for (int a = 1; a < orders; ++a)
        for (const auto& ord : orders_of(a))
          r.sup[a] = std::max(r.sup[a], std::abs(kernel_tail_derivative(spec, z, w, ord)));
      if (i < 50) {
        const double kinf = std::exp(kernel_infty(spec, z, z).log_mag);
        const double direct = kinf - kernel_diagonal(spec, z);
        const double tail = kernel_tail(spec, z, z).to_complex().real();
        r.diag_dev = std::max(r.diag_dev, std::abs(direct - tail));
        r.diag_scale = std::max(r.diag_scale, kinf);
      }
    }
    res[t] = r;
  });
  std::vector<double> xs;
  for (std::size_t t = 0; t < p.Ns.size(); ++t) {
    const long N = p.Ns[t];
    xs.push_back(static_cast<double>(N));
    const std::string id = tag("kernel-N", N);
    rep.add_bound(base_row(id, N, p.n, o, "shrunk-disk", "max |K_M - K_inf| / tail_bound"), res[t].max_bound_ratio, 1.0);
    rep.add_bound(base_row(id, N, p.n, o, "diagonal", "|(K_inf - K_M)(z,z) - direct tail|"), res[t].diag_dev,
                  1e-13 * res[t].diag_scale);
  }
  if (p.Ns.size() >= 2)
    for (int a = 0; a < orders; ++a) {
      std::vector<double> ys;
      for (const auto& r : res) ys.push_back(r.sup[a]);
      const double exponent = 1.0 + a - 2.0 * o.kappa * o.kappa;
      auto row = base_row(tag("kernel-slope-order", a), p.Ns.back(), p.n, o, "shrunk-disk",
                          "loglog slope of sup |d^alpha (K_M - K_inf)| minus (1 + |alpha| - 2 kappa^2)");
      rep.add_bound(row, loglog_slope(xs, ys) - exponent, 0.5);
    }
  return rep;
}

VerificationReport run_identity_suite(const IdentitySuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("identity");
  struct Case {
    long M;
    double b;
  };
  std::vector<Case> cases;
  for (long M : p.Ms) {
    cases.push_back({M, 1.0});
    if (M != 1) cases.push_back({M, static_cast<double>(M)});
  }
  struct Out {
    double repro = 0.0, trace = 0.0, hs = 0.0;
  };
  std::vector<Out> out(cases.size());
  parallel_for(cases.size(), o.threads, [&](std::size_t c) {
    const KernelSpec spec{cases[c].b, cases[c].M};
    const double ell = 1.0 / std::sqrt(spec.b);
    const double rad = std::sqrt(static_cast<double>(spec.M) / spec.b);
    // panels of width about 2 ell resolve the phase of K(z, x) K(x, w)
    const double half = rad + 9.0 * ell;
    const QuadratureGrid grid = cartesian_grid({0.0, 0.0}, half, 24, std::max(4, static_cast<int>(std::ceil(half / ell))));
    std::mt19937_64 rng(derive_seed(o.seed, c));
    Out r;
    for (int i = 0; i < p.points; ++i) {
      const cplx z = sample_disk(rng, 0.8 * rad + ell), w = sample_disk(rng, 0.8 * rad + ell);
      r.repro = std::max(r.repro, reproducing_residual(spec, z, w, grid));
    }
    const double m = static_cast<double>(spec.M);
    r.trace = std::abs(kernel_trace(spec, grid) - m) / m;
    r.hs = std::abs(kernel_hilbert_schmidt(spec, grid) - m) / m;
    out[c] = r;
  });
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const std::string id = "identity-M" + std::to_string(cases[c].M) + "-b" + format_double(cases[c].b);
    rep.add_bound(base_row(id, cases[c].M, 0, o, "plane", "reproducing residual"), out[c].repro, 1e-8);
    rep.add_bound(base_row(id, cases[c].M, 0, o, "plane", "trace relative error"), out[c].trace, 1e-6);
    rep.add_bound(base_row(id, cases[c].M, 0, o, "plane", "Hilbert-Schmidt relative error"), out[c].hs, 1e-6);
  }
  return rep;
}

VerificationReport run_upsilon_suite(const RegimeSuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("upsilon");
  const RegimeClassifier cl{o.kappa, o.gamma};
  struct Out {
    std::vector<double> nm, sm, sm_pred;
    std::vector<std::string> sm_regime;
  };
  std::vector<Out> out(p.Ns.size());
  parallel_for(p.Ns.size(), o.threads, [&](std::size_t t) {
    const long N = p.Ns[t];
    Out r;
    for (int c = 0; c < p.configs; ++c) {
      std::mt19937_64 rng(derive_seed(o.seed, static_cast<std::uint64_t>(N) * 1000 + c));
      const HoleConfig a = sample_config(rng, N, p.n, RegimeKind::no_merging, cl);
      r.nm.push_back(std::abs(upsilon(a) - 1.0));
      if (p.n >= 2) {
        const HoleConfig s = sample_config(rng, N, p.n, RegimeKind::single_merging, cl);
        const Regime reg = cl.classify(s);
        r.sm.push_back(upsilon(s));
        r.sm_pred.push_back(upsilon_prediction(s, reg));
        r.sm_regime.push_back(reg.name());
      }
    }
    out[t] = r;
  });
  for (std::size_t t = 0; t < p.Ns.size(); ++t) {
    const long N = p.Ns[t];
    for (std::size_t c = 0; c < out[t].nm.size(); ++c) {
      const std::string id = tag("upsilon-N", N) + "-c" + std::to_string(c);
      rep.add_bound(base_row(id, N, p.n, o, "no-merging", "|Upsilon - 1|"), out[t].nm[c], 1e-6);
      if (c < out[t].sm.size())
        rep.add_tolerance(base_row(id, N, p.n, o, out[t].sm_regime[c], "Upsilon"), out[t].sm[c], out[t].sm_pred[c],
                          1e-4);
    }
  }
  // separation sweep for one pair
  const long N = p.sweep_N;
  const double b = static_cast<double>(N);
  const double d = cl.delta(N);
  const double s_lo = std::pow(b, -0.5 * (1.0 + o.gamma)) * 1.001, s_hi = 4.0 * d;
  const cplx c0{0.1, -0.05};
  const cplx dir = std::polar(1.0, 0.7);
  for (int k = 0; k < p.sweep_points; ++k) {
    const double s = s_lo * std::pow(s_hi / s_lo, static_cast<double>(k) / std::max(1, p.sweep_points - 1));
    const HoleConfig cfg{{c0 + 0.5 * s * dir, c0 - 0.5 * s * dir}, N, b};
    const std::string id = tag("upsilon-sweep-N", N) + "-k" + std::to_string(k);
    rep.add_tolerance(base_row(id, N, 2, o, cl.classify(cfg).name(), "Upsilon vs 1 - exp(-b s^2), s=" + format_double(s)),
                      upsilon(cfg), -std::expm1(-b * s * s), 1e-4);
  }
  return rep;
}

VerificationReport run_potential_suite(const PotentialSuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("potential");
  const RegimeClassifier cl{o.kappa, o.gamma};
  struct Item {
    std::string id, regime;
    long N;
    double dA, dV;
  };
  std::vector<std::vector<Item>> out(p.Ns.size());
  parallel_for(p.Ns.size(), o.threads, [&](std::size_t t) {
    const long N = p.Ns[t];
    std::vector<Item> items;
    for (int c = 0; c < p.configs; ++c) {
      std::mt19937_64 rng(derive_seed(o.seed, static_cast<std::uint64_t>(N) * 1000 + c));
      std::vector<HoleConfig> cfgs{sample_config(rng, N, p.n, RegimeKind::no_merging, cl)};
      if (p.n >= 2) cfgs.push_back(sample_config(rng, N, p.n, RegimeKind::single_merging, cl));
      for (const auto& cfg : cfgs) {
        const Regime reg = cl.classify(cfg);
        for (std::size_t j = 0; j < cfg.n(); ++j) {
          const EmergentField f = emergent_field_derivative(cfg, j);
          const EmergentField pr = asymptotic_prediction(cfg, j, reg);
          items.push_back({tag("potential-N", N) + "-c" + std::to_string(c) + "-j" + std::to_string(j + 1),
                           reg.name(), N, vnorm(vsub(f.A, pr.A)) / cfg.b, std::abs(f.V - pr.V) / cfg.b});
        }
      }
    }
    out[t] = std::move(items);
  });
  for (const auto& items : out)
    for (const auto& it : items) {
      rep.add_bound(base_row(it.id, it.N, static_cast<long>(p.n), o, it.regime, "|A - prediction| / N"), it.dA, 1e-5);
      rep.add_bound(base_row(it.id, it.N, static_cast<long>(p.n), o, it.regime, "|V - prediction| / N"), it.dV, 1e-5);
    }

  // merging sweep: correction profiles
  const long N = p.sweep_N;
  const double b = static_cast<double>(N), sb = std::sqrt(b);
  const double d = cl.delta(N);
  const double s_lo = std::pow(b, -0.5 * (1.0 + o.gamma)) * 1.001, s_hi = 4.0 * d;
  std::vector<double> ss;
  for (int k = 0; k < p.sweep_points; ++k)
    ss.push_back(s_lo * std::pow(s_hi / s_lo, static_cast<double>(k) / std::max(1, p.sweep_points - 1)));
  ss.push_back(1.0 / sb);
  std::sort(ss.begin(), ss.end());
  const cplx c0{0.1, 0.05};
  const cplx dir = std::polar(1.0, 0.3);
  for (std::size_t k = 0; k < ss.size(); ++k) {
    const double s = ss[k];
    const HoleConfig cfg{{c0 + 0.5 * s * dir, c0 - 0.5 * s * dir}, N, b};
    const EmergentField f = emergent_field_derivative(cfg, 0);
    const Vec2 yp = perp(to_vec2(cfg.w[0]));
    const Vec2 ab = ab_sum(cfg.w, 0);
    const Vec2 corrA{(f.A[0] - b * yp[0] + ab[0]) / sb, (f.A[1] - b * yp[1] + ab[1]) / sb};
    const Vec2 y = to_vec2(sb * (cfg.w[0] - cfg.w[1]));
    const Vec2 predA = correction_a(y);
    const double corrV = (2.0 * b - f.V) / b;
    const double predV = correction_v(y);
    const std::string id = tag("potential-sweep-N", N) + "-k" + std::to_string(k);
    const std::string reg = cl.classify(cfg).name();
    const std::string sx = ", s=" + format_double(s);
    if (predV >= 1e-6)
      rep.add_bound(base_row(id, N, 2, o, reg, "|(2N - V)/N / v - 1|" + sx), std::abs(corrV / predV - 1.0), 0.01);
    else
      rep.add_tolerance(base_row(id, N, 2, o, reg, "(2N - V)/N vs v" + sx), corrV, predV, 1e-6);
    const double na = vnorm(predA);
    if (na >= 1e-6)
      rep.add_bound(base_row(id, N, 2, o, reg, "|A_corr - a| / |a|" + sx), vnorm(vsub(corrA, predA)) / na, 0.01);
    else
      rep.add_bound(base_row(id, N, 2, o, reg, "|A_corr - a|" + sx), vnorm(vsub(corrA, predA)), 1e-6);
  }
  return rep;
}

VerificationReport run_consistency_suite(const ConsistencySuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("consistency");
  const RegimeClassifier cl{p.kappa, o.gamma};
  SuiteOptions ro = o;
  ro.kappa = p.kappa;
  struct Item {
    double dA, dV;
  };
  std::vector<std::vector<Item>> out(p.configs);
  parallel_for(static_cast<std::size_t>(p.configs), o.threads, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(o.seed, c));
    const HoleConfig cfg = sample_config(rng, p.N, p.n, RegimeKind::no_merging, cl);
    for (std::size_t j = 0; j < cfg.n(); ++j) {
      const EmergentField fd = emergent_field_derivative(cfg, j);
      const EmergentField fi = emergent_field_integral(cfg, j);
      out[c].push_back({vnorm(vsub(fd.A, fi.A)), std::abs(fd.V - fi.V)});
    }
  });
  const double N = static_cast<double>(p.N);
  for (int c = 0; c < p.configs; ++c)
    for (std::size_t j = 0; j < out[c].size(); ++j) {
      const std::string id = "consistency-c" + std::to_string(c) + "-j" + std::to_string(j + 1);
      rep.add_bound(base_row(id, p.N, static_cast<long>(p.n), ro, "no-merging", "|A_derivative - A_integral|"),
                    out[c][j].dA, 1e-6 * N);
      rep.add_bound(base_row(id, p.N, static_cast<long>(p.n), ro, "no-merging", "|V_derivative - V_integral|"),
                    out[c][j].dV, 1e-4 * N);
    }
  return rep;
}

VerificationReport run_global_suite(const GlobalSuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("global");
  const RegimeClassifier cl{o.kappa, o.gamma};
  struct Out {
    double maxA = 0.0, maxV = 0.0, minV = INFINITY, maxInner = 0.0;
    bool finite = true;
    RegimeKind kind = RegimeKind::no_merging;
  };
  std::vector<Out> out(p.configs);
  const double N = static_cast<double>(p.N);
  parallel_for(static_cast<std::size_t>(p.configs), o.threads, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(o.seed, c));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HoleConfig cfg{std::vector<cplx>(p.n), p.N, N};
    const double d = cl.delta(p.N);
    const int mode = static_cast<int>(c % 4);
    // mode 1 stays inside the shrunk disk; the others use the wider disk
    for (auto& y : cfg.w) y = sample_disk(rng, mode == 1 ? 1.0 - d : p.radius);
    const double s_min = std::pow(N, -0.5 * (1.0 + o.gamma));
    const auto near = [&](std::size_t from, double lo, double hi) {
      return cfg.w[from] + std::polar(lo * std::pow(hi / lo, u(rng)), 2.0 * kPi * u(rng));
    };
    if (mode >= 2 && p.n >= 2) cfg.w[1] = near(0, s_min, 2.0 * d);
    if (mode == 2 && p.n >= 4) cfg.w[3] = near(2, s_min, 2.0 * d);
    if (mode == 3 && p.n >= 3) cfg.w[2] = near(1, 0.25 * s_min, 2.0 * d);
    Out r;
    r.kind = cl.classify(cfg).kind;
    for (std::size_t j = 0; j < cfg.n(); ++j) {
      const EmergentField f = emergent_field_derivative(cfg, j);
      if (!std::isfinite(f.A[0]) || !std::isfinite(f.A[1]) || !std::isfinite(f.V)) r.finite = false;
      r.maxA = std::max(r.maxA, vnorm(f.A) / N);
      r.maxV = std::max(r.maxV, f.V / std::pow(N, 1.5));
      r.minV = std::min(r.minV, f.V);
      if (std::abs(cfg.w[j]) <= 0.8) {
        const Vec2 yp = perp(to_vec2(cfg.w[j]));
        r.maxInner = std::max(r.maxInner, vnorm({f.A[0] - N * yp[0], f.A[1] - N * yp[1]}) / std::sqrt(N));
      }
    }
    out[c] = r;
  });
  Out agg;
  long finite = 0;
  std::array<long, 4> counts{};
  for (const auto& r : out) {
    agg.maxA = std::max(agg.maxA, r.maxA);
    agg.maxV = std::max(agg.maxV, r.maxV);
    agg.minV = std::min(agg.minV, r.minV);
    agg.maxInner = std::max(agg.maxInner, r.maxInner);
    finite += r.finite ? 1 : 0;
    ++counts[static_cast<int>(r.kind)];
  }
  const long n = static_cast<long>(p.n);
  const std::string id = tag("global-N", p.N);
  rep.add_tolerance(base_row(id, p.N, n, o, "all", "configs with finite fields"), static_cast<double>(finite),
                    static_cast<double>(p.configs), 0.0);
  rep.add_bound(base_row(id, p.N, n, o, "all", "max |A_j| / N"), agg.maxA, 10.0);
  rep.add_bound(base_row(id, p.N, n, o, "all", "max V_j / N^1.5"), agg.maxV, 10.0);
  rep.add_bound(base_row(id, p.N, n, o, "all", "-min V_j"), -agg.minV, 0.0);
  rep.add_bound(base_row(id, p.N, n, o, "|y_j|<=0.8", "max |A_j - N y_j^perp| / sqrt(N)"), agg.maxInner, 10.0);
  const char* names[] = {"outside-droplet", "no-merging", "single-merging", "remainder"};
  for (int k = 0; k < 4; ++k)
    rep.add_bound(base_row(id, p.N, n, o, names[k], "config count"), static_cast<double>(counts[k]),
                  static_cast<double>(p.configs));
  return rep;
}

VerificationReport run_correction_suite(const SuiteOptions& o) {
  VerificationReport rep("correction");
  // int v dy / pi = int_0^inf v(u) du with u = |y|^2
  std::vector<double> x, w;
  gauss_legendre(20, x, w);
  double integral = 0.0;
  for (int panel = 0; panel < 200; ++panel) {
    const double a = 0.5 * panel, h = 0.25;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double uu = a + h * (x[i] + 1.0);
      integral += h * w[i] * correction_v({std::sqrt(uu), 0.0});
    }
  }
  rep.add_tolerance(base_row("correction-v-mass", 0, 0, o, "plane", "int v dy / pi"), integral, 1.0, 1e-10);
  rep.add_tolerance(base_row("correction-v-zero", 0, 0, o, "plane", "v(0)"), correction_v({0.0, 0.0}), 1.0, 1e-15);
  double sup = 0.0;
  for (int k = 0; k <= 900; ++k) {
    const double r = std::pow(10.0, -6.0 + 9.0 * k / 900.0);
    for (int t = 0; t < 8; ++t) {
      const Vec2 y = to_vec2(std::polar(r, 2.0 * kPi * t / 8.0 + 0.1));
      const Vec2 a = correction_a(y);
      const Vec2 yp = perp(y);
      const double r2 = r * r;
      sup = std::max(sup, vnorm({a[0] - yp[0] / r2, a[1] - yp[1] / r2}));
    }
  }
  rep.add_bound(base_row("correction-a-sup", 0, 0, o, "plane", "sup |a(y) - y^perp/|y|^2|"), sup, 0.5 + 1e-12);
  return rep;
}

VerificationReport run_oracle_suite(const OracleSuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("oracle");
  // exact partition identity
  for (long N = 1; N <= 3; ++N)
    for (std::size_t n = 1; n <= 2; ++n) {
      std::vector<double> bs{1.0};
      if (N != 1) bs.push_back(static_cast<double>(N));
      bs.push_back(2.5);
      for (double b : bs) {
        double worst = 0.0;
        for (int c = 0; c < p.partition_configs; ++c) {
          std::mt19937_64 rng(derive_seed(o.seed, static_cast<std::uint64_t>(N * 100000 + n * 10000 + b * 100 + c)));
          HoleConfig cfg{std::vector<cplx>(n), N, b};
          for (auto& y : cfg.w) y = sample_disk(rng, 1.2);
          worst = std::max(worst, std::abs(std::expm1(log_partition(cfg).log_value - partition_exact(cfg))));
        }
        const std::string id = "oracle-partition-N" + std::to_string(N) + "-n" + std::to_string(n) + "-b" + format_double(b);
        rep.add_bound(base_row(id, N, static_cast<long>(n), o, "any", "max relative deviation from monomial expansion"),
                      worst, 1e-10);
      }
    }
  {
    const HoleConfig c1{{cplx(1.0, 0.0)}, 1, 1.0};
    rep.add_tolerance(base_row("oracle-partition-hand", 1, 1, o, "any", "c^-2 at N=1, w=1"), std::exp(partition_exact(c1)),
                      2.0 * kPi, 1e-12 * 2.0 * kPi);
    const HoleConfig c2{{}, 2, 2.0};
    rep.add_tolerance(base_row("oracle-partition-hand", 2, 0, o, "any", "c^-2 at N=2, no holes"),
                      std::exp(partition_exact(c2)), kPi * kPi / 4.0, 1e-12 * kPi * kPi / 4.0);
  }

  // characteristic polynomial moments
  struct CP {
    HoleConfig cfg;
    std::uint64_t id;
  };
  std::vector<CP> cps{{HoleConfig{{cplx(0.7, 0.0)}, 1, 1.0}, 1}};
  {
    std::mt19937_64 rng(derive_seed(o.seed, 777));
    HoleConfig c{{sample_disk(rng, 0.6), sample_disk(rng, 0.6)}, 8, 8.0};
    cps.push_back({c, 2});
  }
  std::vector<CharpolyEstimate> est(cps.size());
  parallel_for(cps.size(), o.threads, [&](std::size_t k) {
    PlasmaConfig m;
    m.burn_in = 1000;
    m.thin = 10;
    m.steps = m.burn_in + m.thin * p.charpoly_samples;
    m.seed = derive_seed(o.seed, 1000 + cps[k].id);
    est[k] = charpoly_moment_mc(cps[k].cfg, m);
  });
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const double exact = charpoly_moment_exact(cps[k].cfg);
    const double dev = std::abs(1.0 - std::exp(exact - est[k].log_estimate));
    const double se = std::exp(est[k].log_standard_error - est[k].log_estimate);
    rep.add_bound(base_row("oracle-charpoly-N" + std::to_string(cps[k].cfg.N), cps[k].cfg.N,
                           static_cast<long>(cps[k].cfg.n()), o, "any", "relative MC deviation (bound: 3 SE)"),
                  dev, 3.0 * se);
  }

  // energy identity
  struct EI {
    long N;
    double q;
  };
  for (const EI e : {EI{1, 1.0}, EI{2, 1.0}, EI{2, 2.0}}) {
    const HoleConfig cfg{{cplx(0.0, 0.0)}, e.N, static_cast<double>(e.N)};
    const TestFunction phi = gaussian_test_function({0.3, 0.0}, 0.35, {1.0, -0.5});
    const EnergyIdentityResult r = energy_identity_check(cfg, e.q, phi);
    rep.add_bound(base_row("oracle-energy-N" + std::to_string(e.N) + "-q" + format_double(e.q), e.N, 1, o, "any",
                           "energy identity relative residual"),
                  r.residual, 1e-5);
  }

  // Slater densities
  {
    std::mt19937_64 rng(derive_seed(o.seed, 4242));
    const double b = 3.0;
    const std::vector<long> ks{0, 1, 2};
    double worst = 0.0, sym = 0.0, diag = 0.0;
    for (int c = 0; c < 10; ++c) {
      const cplx x1 = sample_disk(rng, 1.2), x2 = sample_disk(rng, 1.2);
      const double det = slater_density(b, ks, {x1, x2});
      const double brute = slater_density_bruteforce(b, ks, {x1, x2});
      worst = std::max(worst, std::abs(det - brute) / std::abs(brute));
      sym = std::max(sym, std::abs(det - slater_density(b, ks, {x2, x1})) / std::abs(det));
      diag = std::max(diag, std::abs(slater_density(b, ks, {x1, x1})));
    }
    rep.add_bound(base_row("oracle-slater-N3-m2", 3, 0, o, "any", "relative determinant vs brute force"), worst, 1e-10);
    rep.add_bound(base_row("oracle-slater-N3-m2", 3, 0, o, "any", "relative asymmetry"), sym, 1e-12);
    rep.add_bound(base_row("oracle-slater-N3-m2", 3, 0, o, "any", "density on the diagonal"), diag, 0.0);
  }

  // delta interaction
  for (long k : {0L, 1L}) {
    const double b = 4.0;
    const TestFunction u = gaussian_test_function({0.2, 0.1}, 0.4, {0.5, 0.0});
    const DeltaCheckResult r = delta_check(b, k, u, default_delta_grid(b, k, u), 64, derive_seed(o.seed, 31 + k));
    const std::string id = "oracle-delta-k" + std::to_string(k);
    rep.add_bound(base_row(id, 1, 1, o, "any", "quadratic form residual"), r.quadratic_residual, 1e-8);
    rep.add_bound(base_row(id, 1, 1, o, "any", "projector residual"), r.projector_residual, 1e-10);
  }

  if (p.include_mcmc) {
    // Gaussian moment at N = 1
    {
      PlasmaConfig m;
      m.N = 1;
      m.b = 4.0;
      m.p = 0;
      m.burn_in = 1000;
      m.thin = 10;
      m.steps = m.burn_in + 10 * 20000;
      m.seed = derive_seed(o.seed, 5001);
      std::vector<double> r2;
      plasma_mcmc(m, [&](const PlasmaSample& s) { r2.push_back(std::norm(s.positions[0])); });
      double mean = 0.0;
      for (double v : r2) mean += v;
      mean /= static_cast<double>(r2.size());
      // batch means standard error
      const std::size_t B = 32, per = r2.size() / B;
      double bv = 0.0;
      for (std::size_t k = 0; k < B; ++k) {
        double bm = 0.0;
        for (std::size_t i = k * per; i < (k + 1) * per; ++i) bm += r2[i];
        bm /= static_cast<double>(per);
        bv += (bm - mean) * (bm - mean);
      }
      const double se = std::sqrt(bv / static_cast<double>(B - 1) / static_cast<double>(B));
      rep.add_tolerance(base_row("oracle-mcmc-gaussian", 1, 0, o, "any", "E|z|^2 (tolerance: 3 SE)"), mean, 0.25,
                        3.0 * se);
    }
    PlasmaConfig m;
    m.N = 16;
    m.b = 16.0;
    m.p = 1;
    m.mu = 1;
    m.burn_in = 1000;
    m.thin = 10;
    m.steps = p.mcmc_sweeps;
    m.seed = derive_seed(o.seed, 5002);
    std::vector<double> radii;
    plasma_mcmc(m, [&](const PlasmaSample& s) {
      for (const auto& z : s.positions) radii.push_back(std::abs(z));
    });
    const RadialComparison cmp = compare_radial_density(radii, m.N, m.b, 30, 1.5);
    rep.add_bound(base_row("oracle-mcmc-radial", 16, 0, o, "any", "L1 radial density distance"), cmp.l1, 0.05);
  }
  return rep;
}

RemainderVolume remainder_volume(long N, std::size_t n, const RegimeClassifier& classifier, long samples,
                                 std::uint64_t seed) {
  RemainderVolume v;
  v.samples = samples;
  v.delta = classifier.delta(N);
  const double R = 1.0 - v.delta;
  const double area = kPi * R * R;
  std::mt19937_64 rng(seed);
  HoleConfig cfg{std::vector<cplx>(n), N, static_cast<double>(N)};
  for (long s = 0; s < samples; ++s) {
    for (auto& y : cfg.w) y = sample_disk(rng, R);
    // the closed-disk boundary has measure zero
    if (classifier.classify(cfg).kind == RegimeKind::remainder) ++v.hits;
  }
  const double total = std::pow(area, static_cast<double>(n));
  const double f = static_cast<double>(v.hits) / static_cast<double>(samples);
  v.volume = f * total;
  v.standard_error = std::sqrt(f * (1.0 - f) / static_cast<double>(samples)) * total;
  v.constant = v.volume / std::pow(v.delta, 4);
  // two close pairs share a tracer, or one pair closer than N^{-(1+gamma)/2}
  const double np = static_cast<double>(n * (n - 1) / 2);
  const double disc = kPi * 4.0 * v.delta * v.delta;
  const double pairs_of_pairs = np * (np - 1.0) / 2.0;
  v.union_bound = pairs_of_pairs * total / area * disc * disc / area +
                  np * total / area * kPi * std::pow(static_cast<double>(N), -1.0 - classifier.gamma);
  return v;
}

VerificationReport run_volume_suite(const VolumeSuiteParams& p, const SuiteOptions& o) {
  VerificationReport rep("volume");
  const RegimeClassifier cl{o.kappa, o.gamma};
  const RemainderVolume v = remainder_volume(p.N, p.n, cl, p.samples, derive_seed(o.seed, 0));
  const std::string id = tag("volume-N", p.N);
  const long n = static_cast<long>(p.n);
  rep.add_bound(base_row(id, p.N, n, o, "remainder", "volume (bound: union bound + 3 SE)"), v.volume,
                v.union_bound + 3.0 * v.standard_error);
  rep.add_bound(base_row(id, p.N, n, o, "remainder", "volume / delta_N^4"), v.constant, p.claimed_constant);
  return rep;
}

std::vector<std::string> suite_names() {
  return {"kernel", "identity", "upsilon", "potential", "consistency", "global", "correction", "oracle", "volume"};
}

VerificationReport run_suite(const std::string& name, const SuiteOptions& o) {
  if (name == "kernel") return run_kernel_suite({}, o);
  if (name == "identity") return run_identity_suite({}, o);
  if (name == "upsilon") return run_upsilon_suite({}, o);
  if (name == "potential") return run_potential_suite({}, o);
  if (name == "consistency") return run_consistency_suite({}, o);
  if (name == "global") return run_global_suite({}, o);
  if (name == "correction") return run_correction_suite(o);
  if (name == "oracle") return run_oracle_suite({}, o);
  if (name == "volume") return run_volume_suite({}, o);
  throw UsageError("unknown suite '" + name + "'");
}

}  // namespace qhflux
