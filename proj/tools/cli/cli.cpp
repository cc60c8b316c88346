#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "qhflux/harness.hpp"
#include "qhflux/kernel.hpp"
#include "qhflux/oracle.hpp"
#include "qhflux/partition.hpp"
#include "qhflux/plasma.hpp"
#include "qhflux/potentials.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;

namespace qhflux::cli {

namespace {

// ordered key/value output, rendered as "key: value" lines or one JSON object
class Output {
 public:
  void put(const std::string& k, double v) { items_.push_back({k, nlohmann::ordered_json(v), format_double(v)}); }
  void put(const std::string& k, long v) { items_.push_back({k, nlohmann::ordered_json(v), std::to_string(v)}); }
  void put(const std::string& k, const std::string& v) { items_.push_back({k, nlohmann::ordered_json(v), v}); }
  void put(const std::string& k, cplx v) { put(k, format_complex(v)); }

  void render(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto& it : items_) j[it.key] = std::isfinite(number(it)) ? it.json : nlohmann::ordered_json(it.text);
      os << j.dump(2) << '\n';
      return;
    }
    for (const auto& it : items_) os << it.key << ": " << it.text << '\n';
  }

 private:
  struct Item {
    std::string key;
    nlohmann::ordered_json json;
    std::string text;
  };
  static double number(const Item& it) { return it.json.is_number_float() ? it.json.get<double>() : 0.0; }
  std::vector<Item> items_;
};

double resolve_b(double b, long N) {
  if (b < 0.0 || std::isnan(b)) throw UsageError("--b must be positive (0 selects b = N)");
  return b > 0.0 ? b : static_cast<double>(N);
}

HoleConfig hole_config(long N, double b, const std::string& holes) {
  HoleConfig c{parse_complex_list(holes), N, resolve_b(b, N)};
  validate(c);
  return c;
}

void echo_config(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  std::ofstream f(fs::path(cfg.output_dir) / "config.json");
  f << to_json(cfg).dump(2) << '\n';
  if (!f) throw std::runtime_error("cannot write config.json into " + cfg.output_dir);
}

std::string regime_name(const HoleConfig& c, const RegimeClassifier& cl, Regime* out = nullptr) {
  try {
    const Regime r = cl.classify(c);
    if (out) *out = r;
    return r.name();
  } catch (const DomainError&) {
    return "unclassified";
  }
}

bool has_prediction(const Regime& r) {
  return r.kind == RegimeKind::no_merging || r.kind == RegimeKind::single_merging;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.kernel;
  const KernelSpec spec{resolve_b(p.b, p.N), p.N + p.n};
  validate(spec);
  const cplx z = parse_complex(p.z), w = parse_complex(p.w);
  Output o;
  o.put("M", spec.M);
  o.put("b", spec.b);
  o.put("K", kernel_eval(spec, z, w).to_complex());
  o.put("K_inf", kernel_infty(spec, z, w).to_complex());
  o.put("K_inf - K", kernel_tail(spec, z, w).to_complex());
  try {
    o.put("tail_bound", kernel_tail_bound(static_cast<double>(p.N), z, w));
  } catch (const DomainError&) {
    o.put("tail_bound", std::string("n/a (|z conj(w)| >= 1)"));
  }
  o.render(out, cfg.format);
  return kExitOk;
}

int cmd_upsilon(const RunConfig& cfg, std::ostream& out) {
  const HoleConfig c = hole_config(cfg.upsilon.N, cfg.upsilon.b, cfg.upsilon.holes);
  const RegimeClassifier cl{cfg.kappa, cfg.gamma};
  Regime reg;
  const std::string rn = regime_name(c, cl, &reg);
  Output o;
  o.put("Upsilon", upsilon(c));
  o.put("log_Upsilon", log_upsilon(c));
  if (!has_coincident_points(c.w)) {
    const PartitionValue pv = log_partition(c);
    o.put("log_partition", pv.log_value);
    o.put("log_Gamma", pv.components.log_gamma);
  }
  o.put("regime", rn);
  if (rn != "unclassified" && has_prediction(reg)) {
    const double pred = upsilon_prediction(c, reg);
    o.put("prediction", pred);
    o.put("deviation", std::abs(upsilon(c) - pred));
  }
  o.render(out, cfg.format);
  return kExitOk;
}

int cmd_potentials(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.potentials;
  const HoleConfig c = hole_config(p.N, p.b, p.holes);
  if (p.j < 1 || static_cast<std::size_t>(p.j) > c.n()) throw UsageError("--j must lie in 1..n");
  if (p.method != "derivative" && p.method != "integral" && p.method != "both")
    throw UsageError("--method must be derivative, integral or both");
  const std::size_t j = static_cast<std::size_t>(p.j - 1);
  const RegimeClassifier cl{cfg.kappa, cfg.gamma};
  Regime reg;
  const std::string rn = regime_name(c, cl, &reg);
  const EmergentField f = p.method == "integral" ? emergent_field_integral(c, j) : emergent_field_derivative(c, j);
  Output o;
  o.put("A_x", f.A[0]);
  o.put("A_y", f.A[1]);
  o.put("V", f.V);
  o.put("regime", rn);
  if (rn != "unclassified" && has_prediction(reg)) {
    const EmergentField pr = asymptotic_prediction(c, j, reg);
    o.put("predicted_A_x", pr.A[0]);
    o.put("predicted_A_y", pr.A[1]);
    o.put("predicted_V", pr.V);
    o.put("deviation_A", std::hypot(f.A[0] - pr.A[0], f.A[1] - pr.A[1]));
    o.put("deviation_V", std::abs(f.V - pr.V));
  }
  if (p.method == "both") {
    const EmergentField g = emergent_field_integral(c, j);
    o.put("integral_A_x", g.A[0]);
    o.put("integral_A_y", g.A[1]);
    o.put("integral_V", g.V);
    o.put("method_difference_A", std::hypot(f.A[0] - g.A[0], f.A[1] - g.A[1]));
    o.put("method_difference_V", std::abs(f.V - g.V));
  }
  o.render(out, cfg.format);
  return kExitOk;
}

int cmd_field_map(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.field_map;
  if (p.nx < 0 || p.ny < 0) throw UsageError("grid sizes must be nonnegative");
  const std::vector<cplx> fixed = parse_complex_list(p.holes);
  const double b = resolve_b(p.b, p.N);
  if (p.N < 1 || !(b > 0.0)) throw UsageError("N and b must be positive");
  const RegimeClassifier cl{cfg.kappa, cfg.gamma};
  const fs::path path = fs::path(cfg.output_dir) / "field_map.csv";
  std::ofstream f(path);
  f << "x,y,A_x,A_y,V,regime,predicted_A_x,predicted_A_y,predicted_V\n";
  const std::string nan = "nan";
  const auto coord = [](double lo, double hi, long count, long i) {
    return count <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  };
  long flagged = 0, rows = 0;
  for (long iy = 0; iy < p.ny; ++iy)
    for (long ix = 0; ix < p.nx; ++ix) {
      const cplx y{coord(p.x_min, p.x_max, p.nx, ix), coord(p.y_min, p.y_max, p.ny, iy)};
      HoleConfig c{fixed, p.N, b};
      c.w.insert(c.w.begin(), y);
      ++rows;
      f << format_double(y.real()) << ',' << format_double(y.imag()) << ',';
      if (has_coincident_points(c.w)) {
        ++flagged;
        f << nan << ',' << nan << ',' << nan << ",coincident," << nan << ',' << nan << ',' << nan << '\n';
        continue;
      }
      Regime reg;
      const std::string rn = regime_name(c, cl, &reg);
      EmergentField fl;
      try {
        fl = emergent_field_derivative(c, 0);
      } catch (const Error&) {
        ++flagged;
        f << nan << ',' << nan << ',' << nan << ",degenerate," << nan << ',' << nan << ',' << nan << '\n';
        continue;
      }
      f << format_double(fl.A[0]) << ',' << format_double(fl.A[1]) << ',' << format_double(fl.V) << ',' << '"' << rn
        << '"' << ',';
      if (rn != "unclassified" && has_prediction(reg)) {
        const EmergentField pr = asymptotic_prediction(c, 0, reg);
        f << format_double(pr.A[0]) << ',' << format_double(pr.A[1]) << ',' << format_double(pr.V) << '\n';
      } else {
        f << nan << ',' << nan << ',' << nan << '\n';
      }
    }
  if (!f) throw std::runtime_error("cannot write " + path.string());
  Output o;
  o.put("file", path.string());
  o.put("rows", rows);
  o.put("flagged", flagged);
  o.render(out, cfg.format);
  return kExitOk;
}

int cmd_mcmc(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.mcmc;
  PlasmaConfig pc;
  pc.N = p.N;
  pc.b = resolve_b(p.b, p.N);
  pc.p = p.p;
  pc.mu = p.mu;
  pc.holes = parse_complex_list(p.holes);
  pc.steps = p.steps;
  pc.burn_in = p.burn_in;
  pc.thin = p.thin;
  pc.proposal_scale = p.proposal_scale;
  pc.seed = cfg.seed;
  validate(pc);
  std::ofstream dump;
  if (!p.dump.empty()) {
    dump.open(p.dump, std::ios::binary);
    if (!dump) throw UsageError("cannot open dump file " + p.dump);
  }
  std::vector<double> radii;
  double r2 = 0.0;
  const PlasmaDiagnostics d = plasma_mcmc(pc, [&](const PlasmaSample& s) {
    for (const auto& z : s.positions) {
      radii.push_back(std::abs(z));
      r2 += std::norm(z);
    }
    if (dump.is_open()) write_dump_record(dump, s);
  });
  Output o;
  o.put("samples", d.samples);
  o.put("acceptance_rate", d.acceptance_rate);
  o.put("mean_abs_z_squared", radii.empty() ? 0.0 : r2 / static_cast<double>(radii.size()));
  if (d.tuning_warning) o.put("warning", d.message);
  if (p.p == 1 && p.mu == 1 && pc.holes.empty() && !radii.empty()) {
    const double rmax = p.r_max > 0.0 ? p.r_max : 1.5 * std::sqrt(static_cast<double>(p.N) / pc.b);
    o.put("radial_l1", compare_radial_density(radii, pc.N, pc.b, p.bins, rmax).l1);
  } else {
    o.put("note", std::string("exploratory run: no exact comparator for these exponents or holes"));
  }
  if (!p.dump.empty()) o.put("dump", p.dump);
  o.render(out, cfg.format);
  return kExitOk;
}

int cmd_charpoly(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.charpoly;
  const HoleConfig c = hole_config(p.N, p.b, p.holes);
  PlasmaConfig m;
  m.burn_in = p.burn_in;
  m.thin = p.thin;
  m.steps = p.burn_in + p.thin * p.samples;
  m.seed = cfg.seed;
  const CharpolyEstimate e = charpoly_moment_mc(c, m);
  const double exact = charpoly_moment_exact(c);
  const double se_rel = std::exp(e.log_standard_error - e.log_estimate);
  const double dev = std::abs(1.0 - std::exp(exact - e.log_estimate));
  Output o;
  o.put("log_estimate", e.log_estimate);
  o.put("log_standard_error", e.log_standard_error);
  o.put("log_exact", exact);
  o.put("samples", e.samples);
  o.put("effective_samples", e.effective_samples);
  o.put("deviation_in_se", dev / se_rel);
  o.render(out, cfg.format);
  return dev <= 3.0 * se_rel ? kExitOk : kExitFailure;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const HoleConfig c = hole_config(cfg.oracle.N, cfg.oracle.b, cfg.oracle.holes);
  const double exact = partition_exact(c);
  const double formula = log_partition(c).log_value;
  const double rel = std::abs(std::expm1(formula - exact));
  Output o;
  o.put("log_partition_exact", exact);
  o.put("log_partition_formula", formula);
  o.put("relative_deviation", rel);
  o.render(out, cfg.format);
  return rel <= 1e-10 ? kExitOk : kExitFailure;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> suites;
  if (cfg.verify.suite == "all")
    suites = suite_names();
  else
    for (std::size_t start = 0;;) {
      const std::size_t comma = cfg.verify.suite.find(',', start);
      suites.push_back(cfg.verify.suite.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  const auto& names = suite_names();
  for (const auto& s : suites)
    if (std::find(names.begin(), names.end(), s) == names.end()) throw UsageError("unknown suite '" + s + "'");
  SuiteOptions so;
  so.seed = cfg.seed;
  so.threads = cfg.threads;
  so.kappa = cfg.kappa;
  so.gamma = cfg.gamma;
  bool ok = true;
  Output o;
  for (const auto& s : suites) {
    const VerificationReport rep = run_suite(s, so);
    const fs::path dir(cfg.output_dir);
    std::ofstream csv(dir / (s + ".csv"));
    rep.write_csv(csv);
    std::ofstream js(dir / (s + ".json"));
    rep.write_json_summary(js);
    if (!csv || !js) throw std::runtime_error("cannot write report files into " + cfg.output_dir);
    const ReportSummary sm = rep.summary();
    o.put(s, std::to_string(sm.rows - sm.failures) + "/" + std::to_string(sm.rows) + " rows pass");
    ok = ok && sm.failures == 0;
  }
  o.render(out, cfg.format);
  return ok ? kExitOk : kExitFailure;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  f.push_back(cur);
  return f;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  std::vector<fs::path> files;
  for (const auto& in : cfg.report.inputs) files.emplace_back(in);
  if (files.empty()) {
    if (!fs::is_directory(cfg.output_dir)) throw UsageError("output directory " + cfg.output_dir + " does not exist");
    for (const auto& s : suite_names())
      if (fs::exists(fs::path(cfg.output_dir) / (s + ".csv"))) files.push_back(fs::path(cfg.output_dir) / (s + ".csv"));
  }
  if (files.empty()) throw UsageError("no report CSV files found");
  bool ok = true;
  Output o;
  for (const auto& path : files) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path.string());
    std::string line;
    std::getline(f, line);
    if (line != csv_header()) throw UsageError(path.string() + " is not a verification report");
    long rows = 0, failures = 0;
    double max_ratio = 0.0;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != 12) throw UsageError("malformed row in " + path.string());
      ++rows;
      if (fields[11] != "true") ++failures;
      const double r = std::strtod(fields[10].c_str(), nullptr);
      if (std::isfinite(r)) max_ratio = std::max(max_ratio, r);
    }
    const std::string key = path.stem().string();
    o.put(key + ".rows", rows);
    o.put(key + ".failures", failures);
    o.put(key + ".max_ratio", max_ratio);
    ok = ok && failures == 0;
  }
  o.render(out, cfg.format);
  return ok ? kExitOk : kExitFailure;
}

std::string find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc) throw UsageError("--config needs a file");
      return argv[i + 1];
    }
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  return from_json(j);
}

void add_hole_options(CLI::App* s, long& N, double& b, std::string& holes) {
  s->add_option("--N", N, "bath particle count");
  s->add_option("--b", b, "field strength (default: N)");
  s->add_option("--holes", holes, "tracer positions, comma-separated a+bi literals");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    const std::string cpath = find_config_path(argc, argv);
    if (!cpath.empty()) cfg = load_config(cpath);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"quasi-hole emergent potential toolkit"};
  app.name("qhflux");
  app.set_help_all_flag("--help-all", "expanded help");
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option("--out", cfg.output_dir, "output directory");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.threads, "worker threads (0: QHFLUX_THREADS or hardware)");
  app.add_option("--kappa", cfg.kappa, "regime constant kappa");
  app.add_option("--gamma", cfg.gamma, "regime constant gamma");
  app.require_subcommand(0, 1);
  app.fallthrough();

  auto* k = app.add_subcommand("kernel", "evaluate K_M, K_inf and the tail bound");
  k->add_option("--N", cfg.kernel.N, "bath particle count");
  k->add_option("--b", cfg.kernel.b, "field strength (default: N)");
  k->add_option("--n", cfg.kernel.n, "extra orbitals (M = N + n)");
  k->add_option("--z", cfg.kernel.z, "first point");
  k->add_option("--w", cfg.kernel.w, "second point");

  auto* u = app.add_subcommand("upsilon", "Upsilon, the partition function and its regime prediction");
  add_hole_options(u, cfg.upsilon.N, cfg.upsilon.b, cfg.upsilon.holes);

  auto* pot = app.add_subcommand("potentials", "emergent A and V for one tracer");
  add_hole_options(pot, cfg.potentials.N, cfg.potentials.b, cfg.potentials.holes);
  pot->add_option("--j", cfg.potentials.j, "tracer index, 1-based");
  pot->add_option("--method", cfg.potentials.method, "derivative, integral or both");

  auto* fm = app.add_subcommand("field-map", "tabulate fields over a grid of positions of tracer 1");
  add_hole_options(fm, cfg.field_map.N, cfg.field_map.b, cfg.field_map.holes);
  fm->add_option("--x-min", cfg.field_map.x_min);
  fm->add_option("--x-max", cfg.field_map.x_max);
  fm->add_option("--y-min", cfg.field_map.y_min);
  fm->add_option("--y-max", cfg.field_map.y_max);
  fm->add_option("--nx", cfg.field_map.nx);
  fm->add_option("--ny", cfg.field_map.ny);

  auto* mc = app.add_subcommand("mcmc", "Metropolis sampling of the plasma");
  add_hole_options(mc, cfg.mcmc.N, cfg.mcmc.b, cfg.mcmc.holes);
  mc->add_option("--p", cfg.mcmc.p, "hole exponent");
  mc->add_option("--mu", cfg.mcmc.mu, "bath exponent");
  mc->add_option("--steps", cfg.mcmc.steps, "total sweeps");
  mc->add_option("--burn-in", cfg.mcmc.burn_in);
  mc->add_option("--thin", cfg.mcmc.thin);
  mc->add_option("--proposal-scale", cfg.mcmc.proposal_scale);
  mc->add_option("--dump", cfg.mcmc.dump, "binary sample file");
  mc->add_option("--bins", cfg.mcmc.bins);
  mc->add_option("--r-max", cfg.mcmc.r_max);

  auto* cp = app.add_subcommand("charpoly", "Monte Carlo characteristic-polynomial moment");
  add_hole_options(cp, cfg.charpoly.N, cfg.charpoly.b, cfg.charpoly.holes);
  cp->add_option("--samples", cfg.charpoly.samples, "thinned samples");
  cp->add_option("--burn-in", cfg.charpoly.burn_in);
  cp->add_option("--thin", cfg.charpoly.thin);

  auto* orc = app.add_subcommand("oracle", "exact partition function by monomial expansion");
  add_hole_options(orc, cfg.oracle.N, cfg.oracle.b, cfg.oracle.holes);

  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("--suite", cfg.verify.suite, "suite name, comma list, or all");

  auto* rep = app.add_subcommand("report", "summarize report CSV files");
  rep->add_option("inputs", cfg.report.inputs, "CSV files (default: suites in --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (auto* sc : app.get_subcommands()) cfg.subcommand = sc->get_name();
  if (cfg.subcommand.empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return kExitUsage;
  }

  try {
    echo_config(cfg);
    const std::string& s = cfg.subcommand;
    if (s == "kernel") return cmd_kernel(cfg, out);
    if (s == "upsilon") return cmd_upsilon(cfg, out);
    if (s == "potentials") return cmd_potentials(cfg, out);
    if (s == "field-map") return cmd_field_map(cfg, out);
    if (s == "mcmc") return cmd_mcmc(cfg, out);
    if (s == "charpoly") return cmd_charpoly(cfg, out);
    if (s == "oracle") return cmd_oracle(cfg, out);
    if (s == "verify") return cmd_verify(cfg, out);
    if (s == "report") return cmd_report(cfg, out);
    err << "error: unknown subcommand\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SingularConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qhflux::cli
