#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qhflux/report.hpp"

namespace qhflux {

const ReportRow& VerificationReport::add(ReportRow row) {
  if (row.mode == RowMode::bound) {
    row.ratio = row.measured == 0.0 ? 0.0 : row.measured / row.bound;
    row.pass = row.measured <= row.bound;
  } else {
    const double dev = std::abs(row.measured - row.predicted);
    row.ratio = dev == 0.0 ? 0.0 : dev / row.bound;
    row.pass = dev <= row.bound;
  }
  if (std::isnan(row.measured) || std::isnan(row.predicted)) row.pass = false;
  rows_.push_back(std::move(row));
  return rows_.back();
}

const ReportRow& VerificationReport::add_bound(ReportRow row, double measured, double bound) {
  row.mode = RowMode::bound;
  row.measured = measured;
  row.bound = bound;
  return add(std::move(row));
}

const ReportRow& VerificationReport::add_tolerance(ReportRow row, double measured, double predicted, double tolerance) {
  row.mode = RowMode::tolerance;
  row.measured = measured;
  row.predicted = predicted;
  row.bound = tolerance;
  return add(std::move(row));
}

void VerificationReport::append(const VerificationReport& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

ReportSummary VerificationReport::summary() const {
  ReportSummary s;
  s.rows = rows_.size();
  for (const auto& r : rows_) {
    if (!r.pass) ++s.failures;
    if (std::isfinite(r.ratio)) s.max_ratio = std::max(s.max_ratio, r.ratio);
  }
  return s;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

std::string csv_header() {
  return "case_id,N,n,kappa,gamma,regime,quantity,measured,predicted,bound,ratio,pass";
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace

void VerificationReport::write_csv(std::ostream& os) const {
  os << csv_header() << '\n';
  for (const auto& r : rows_) {
    os << csv_field(r.case_id) << ',' << r.N << ',' << r.n << ',' << format_double(r.kappa) << ','
       << format_double(r.gamma) << ',' << csv_field(r.regime) << ',' << csv_field(r.quantity) << ','
       << format_double(r.measured) << ',' << format_double(r.predicted) << ',' << format_double(r.bound) << ','
       << format_double(r.ratio) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void VerificationReport::write_json_summary(std::ostream& os) const {
  const ReportSummary s = summary();
  nlohmann::ordered_json j;
  j["suite"] = suite_;
  j["rows"] = s.rows;
  j["failures"] = s.failures;
  j["max_ratio"] = s.max_ratio;
  j["pass"] = s.failures == 0;
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  for (const auto& r : rows_)
    if (!r.pass) failed.push_back({{"case_id", r.case_id}, {"quantity", r.quantity}, {"ratio", format_double(r.ratio)}});
  j["failed_rows"] = failed;
  os << j.dump(2) << '\n';
}

}  // namespace qhflux
