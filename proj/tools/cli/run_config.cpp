#include <algorithm>
#include <cerrno>
#include <cstdlib>

#include "qhflux/report.hpp"
#include "run_config.hpp"

namespace qhflux::cli {

namespace {

double parse_real(const std::string& s, const std::string& whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  const char* b = s.c_str();
  char* e = nullptr;
  errno = 0;
  const double v = std::strtod(b, &e);
  if (e == b || *e != '\0' || errno == ERANGE) throw UsageError("malformed complex literal '" + whole + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

template <class T>
T strict_get(const nlohmann::json& p) {
  if (!p.is_object()) throw UsageError("config params must be a JSON object");
  const nlohmann::json known = T{};
  for (const auto& [k, v] : p.items())
    if (!known.contains(k)) throw UsageError("unknown config parameter '" + k + "'");
  return p.get<T>();
}

}  // namespace

cplx parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw UsageError("empty complex literal");
  if (s.back() != 'i') return {parse_real(s, raw), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  if (cut == std::string::npos) {
    if (body.empty()) return {0.0, 1.0};
    return {0.0, parse_real(body, raw)};
  }
  return {parse_real(body.substr(0, cut), raw), parse_real(body.substr(cut), raw)};
}

std::string format_complex(cplx z) {
  const std::string im = format_double(std::abs(z.imag()));
  const bool neg = std::signbit(z.imag());
  return format_double(z.real()) + (neg ? "-" : "+") + im + "i";
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_complex(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_complex_list(const std::vector<cplx>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_complex(v[k]);
  return s;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"kernel",     "upsilon", "potentials", "field-map", "mcmc",
                                              "charpoly",   "oracle",  "verify",     "report"};
  return names;
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(KernelParams, N, b, n, z, w)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HoleParams, N, b, holes)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PotentialParams, N, b, holes, j, method)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FieldMapParams, N, b, holes, x_min, x_max, y_min, y_max, nx, ny)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(McmcParams, N, b, p, mu, holes, steps, burn_in, thin, proposal_scale,
                                                dump, bins, r_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CharpolyParams, N, b, holes, samples, burn_in, thin)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VerifyParams, suite)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ReportParams, inputs)

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["subcommand"] = c.subcommand;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["format"] = c.format;
  j["threads"] = c.threads;
  j["kappa"] = c.kappa;
  j["gamma"] = c.gamma;
  nlohmann::json p = nlohmann::json::object();
  const std::string& s = c.subcommand;
  if (s == "kernel") p = c.kernel;
  else if (s == "upsilon") p = c.upsilon;
  else if (s == "potentials") p = c.potentials;
  else if (s == "field-map") p = c.field_map;
  else if (s == "mcmc") p = c.mcmc;
  else if (s == "charpoly") p = c.charpoly;
  else if (s == "oracle") p = c.oracle;
  else if (s == "verify") p = c.verify;
  else if (s == "report") p = c.report;
  j["params"] = p;
  return j;
}

RunConfig from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::vector<std::string> known{"subcommand", "seed",  "output_dir", "format",
                                              "threads",    "kappa", "gamma",      "params"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw UsageError("unknown config key '" + k + "'");
  RunConfig c;
  try {
    c.subcommand = j.value("subcommand", std::string{});
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.format = j.value("format", c.format);
    c.threads = j.value("threads", c.threads);
    c.kappa = j.value("kappa", c.kappa);
    c.gamma = j.value("gamma", c.gamma);
    if (j.contains("params")) {
      const auto& p = j.at("params");
      const std::string& s = c.subcommand;
      if (s == "kernel") c.kernel = strict_get<KernelParams>(p);
      else if (s == "upsilon") c.upsilon = strict_get<HoleParams>(p);
      else if (s == "potentials") c.potentials = strict_get<PotentialParams>(p);
      else if (s == "field-map") c.field_map = strict_get<FieldMapParams>(p);
      else if (s == "mcmc") c.mcmc = strict_get<McmcParams>(p);
      else if (s == "charpoly") c.charpoly = strict_get<CharpolyParams>(p);
      else if (s == "oracle") c.oracle = strict_get<HoleParams>(p);
      else if (s == "verify") c.verify = strict_get<VerifyParams>(p);
      else if (s == "report") c.report = strict_get<ReportParams>(p);
      else if (!p.empty()) throw UsageError("config params need a subcommand");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  if (!c.subcommand.empty() &&
      std::find(subcommands().begin(), subcommands().end(), c.subcommand) == subcommands().end())
    throw UsageError("unknown subcommand '" + c.subcommand + "' in config");
  return c;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

}  // namespace qhflux::cli
