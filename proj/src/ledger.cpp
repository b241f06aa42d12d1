#include "cheeselab/ledger.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cheeselab/config.hpp"
#include "cheeselab/util.hpp"

namespace cheeselab::io {

namespace {

constexpr const char* kHeader =
    "test_id,suite,params,expected_re,expected_im,observed_re,observed_im,residual,tolerance,"
    "pass,millis";

void check_field(const std::string& s) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos) {
    throw std::invalid_argument("ledger fields may not contain commas or newlines: " + s);
  }
}

double num(const std::string& file, int line, const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw ConfigError(file, line, "bad number '" + tok + "' in ledger");
  }
  return v;
}

}  // namespace

void VerificationLedger::append(LedgerRow row) {
  check_field(row.test_id);
  check_field(row.suite);
  check_field(row.params);
  rows_.push_back(std::move(row));
}

bool VerificationLedger::all_pass() const {
  for (const auto& r : rows_) {
    if (!r.pass) return false;
  }
  return true;
}

size_t VerificationLedger::pass_count() const {
  size_t n = 0;
  for (const auto& r : rows_) n += r.pass ? 1 : 0;
  return n;
}

std::string emit_csv(const VerificationLedger& ledger) {
  std::ostringstream out;
  out << kHeader << "\n";
  for (const auto& r : ledger.rows()) {
    out << r.test_id << ',' << r.suite << ',' << r.params << ','
        << util::fmt_g17(r.expected.real()) << ',' << util::fmt_g17(r.expected.imag()) << ','
        << util::fmt_g17(r.observed.real()) << ',' << util::fmt_g17(r.observed.imag()) << ','
        << util::fmt_g17(r.residual) << ',' << util::fmt_g17(r.tolerance) << ','
        << (r.pass ? "1" : "0") << ',' << r.millis << "\n";
  }
  return out.str();
}

VerificationLedger parse_csv(const std::string& text, const std::string& file_name) {
  VerificationLedger ledger;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kHeader) throw ConfigError(file_name, 1, "unexpected ledger header");
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 11) throw ConfigError(file_name, line_no, "ledger rows have 11 columns");

    LedgerRow row;
    row.test_id = f[0];
    row.suite = f[1];
    row.params = f[2];
    row.expected = {num(file_name, line_no, f[3]), num(file_name, line_no, f[4])};
    row.observed = {num(file_name, line_no, f[5]), num(file_name, line_no, f[6])};
    row.residual = num(file_name, line_no, f[7]);
    row.tolerance = num(file_name, line_no, f[8]);
    if (f[9] != "0" && f[9] != "1") throw ConfigError(file_name, line_no, "pass flag must be 0/1");
    row.pass = f[9] == "1";
    row.millis = static_cast<long>(num(file_name, line_no, f[10]));
    ledger.append(std::move(row));
  }
  return ledger;
}

void save_ledger(const VerificationLedger& ledger, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path, 0, "cannot open ledger file for writing");
  out << emit_csv(ledger);
}

VerificationLedger load_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open ledger file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

}  // namespace cheeselab::io
