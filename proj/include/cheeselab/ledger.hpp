#pragma once

#include <complex>
#include <string>
#include <vector>

namespace cheeselab::io {

struct LedgerRow {
  std::string test_id;
  std::string suite;
  std::string params;  // semicolon-separated key=value pairs, no commas
  std::complex<double> expected{0, 0};
  std::complex<double> observed{0, 0};
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long millis = 0;
};

class VerificationLedger {
 public:
  void append(LedgerRow row);
  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool all_pass() const;
  size_t pass_count() const;

 private:
  std::vector<LedgerRow> rows_;
};

std::string emit_csv(const VerificationLedger& ledger);
VerificationLedger parse_csv(const std::string& text, const std::string& file_name);

void save_ledger(const VerificationLedger& ledger, const std::string& path);
VerificationLedger load_ledger(const std::string& path);

}  // namespace cheeselab::io
