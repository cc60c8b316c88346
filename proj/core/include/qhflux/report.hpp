#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qhflux {

enum class RowMode {
  bound,      // pass iff measured <= bound
  tolerance,  // pass iff |measured - predicted| <= bound
};

struct ReportRow {
  std::string case_id;
  long N = 0;
  long n = 0;
  double kappa = 0.0;
  double gamma = 0.0;
  std::string regime;
  std::string quantity;
  double measured = 0.0;
  double predicted = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool pass = false;
  RowMode mode = RowMode::bound;
};

struct ReportSummary {
  std::size_t rows = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;
};

class VerificationReport {
 public:
  VerificationReport() = default;
  explicit VerificationReport(std::string suite) : suite_(std::move(suite)) {}

  const std::string& suite() const { return suite_; }
  const std::vector<ReportRow>& rows() const { return rows_; }

  // fills ratio and pass from the mode
  const ReportRow& add(ReportRow row);
  const ReportRow& add_bound(ReportRow row, double measured, double bound);
  const ReportRow& add_tolerance(ReportRow row, double measured, double predicted, double tolerance);
  void append(const VerificationReport& other);

  ReportSummary summary() const;
  bool all_pass() const { return summary().failures == 0; }

  void write_csv(std::ostream& os) const;
  void write_json_summary(std::ostream& os) const;

 private:
  std::string suite_;
  std::vector<ReportRow> rows_;
};

// shortest lossless form: 17 significant digits
std::string format_double(double x);
std::string csv_header();

}  // namespace qhflux
