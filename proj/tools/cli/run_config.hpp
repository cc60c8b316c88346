#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhflux/numeric.hpp"

namespace qhflux::cli {

// "a+bi", "a-bi", "a", "bi"
cplx parse_complex(const std::string& s);
std::string format_complex(cplx z);
std::vector<cplx> parse_complex_list(const std::string& s);
std::string format_complex_list(const std::vector<cplx>& v);

struct KernelParams {
  long N = 64;
  double b = 0.0;  // 0 selects b = N
  long n = 0;
  std::string z = "0";
  std::string w = "0";
};

struct HoleParams {
  long N = 64;
  double b = 0.0;
  std::string holes;
};

struct PotentialParams {
  long N = 64;
  double b = 0.0;
  std::string holes;
  long j = 1;
  std::string method = "derivative";  // derivative, integral, both
};

struct FieldMapParams {
  long N = 64;
  double b = 0.0;
  std::string holes;  // fixed tracers; the moving one is tracer 1
  double x_min = -0.5, x_max = 0.5, y_min = 0.0, y_max = 0.0;
  long nx = 11, ny = 1;
};

struct McmcParams {
  long N = 16;
  double b = 0.0;
  int p = 1;
  int mu = 1;
  std::string holes;
  long steps = 11000;
  long burn_in = 1000;
  long thin = 10;
  double proposal_scale = 0.0;
  std::string dump;
  int bins = 30;
  double r_max = 0.0;  // 0 selects 1.5 sqrt(N/b)
};

struct CharpolyParams {
  long N = 8;
  double b = 0.0;
  std::string holes;
  long samples = 20000;
  long burn_in = 1000;
  long thin = 10;
};

struct VerifyParams {
  std::string suite = "all";
};

struct ReportParams {
  std::vector<std::string> inputs;  // empty: every suite CSV in the output directory
};

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  std::string output_dir = "qhflux-out";
  std::string format = "csv";
  unsigned threads = 0;
  double kappa = 2.0;
  double gamma = 1.0;

  KernelParams kernel;
  HoleParams upsilon;
  PotentialParams potentials;
  FieldMapParams field_map;
  McmcParams mcmc;
  CharpolyParams charpoly;
  HoleParams oracle;
  VerifyParams verify;
  ReportParams report;
};

const std::vector<std::string>& subcommands();

// only the active subcommand's record is serialized
nlohmann::ordered_json to_json(const RunConfig& c);
RunConfig from_json(const nlohmann::json& j);
bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace qhflux::cli
