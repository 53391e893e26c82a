#pragma once

#include <charconv>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

/// Shortest decimal form that re-reads to the same double bit for bit.
inline std::string format_double(double x) {
  char buf[32];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Comma-separated numeric rows under a fixed header line.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<const char*> columns)
      : out_(out), ncols_(columns.size()) {
    if (ncols_ == 0) throw InvalidInput("csv: need at least one column");
    bool first = true;
    for (const char* c : columns) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    if (values.size() != ncols_)
      throw InvalidInput("csv: row width does not match the header");
    bool first = true;
    for (double v : values) {
      if (!first) out_ << ',';
      out_ << format_double(v);
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::size_t ncols_;
};

/// Solution table: one row per grid point per output time. The optional
/// columns are appended in this order when enabled at construction.
class SnapshotWriter {
 public:
  explicit SnapshotWriter(std::ostream& out, bool reconstructed = false, bool reference = false)
      : out_(out), reconstructed_(reconstructed), reference_(reference) {
    out_ << "t,x,eta_bar,q_bar";
    if (reconstructed_) out_ << ",eta_reconstructed";
    if (reference_) out_ << ",eta_reference";
    out_ << '\n';
  }

  void add(double t, const std::vector<double>& x, const std::vector<double>& eta,
           const std::vector<double>& q, const std::vector<double>* reconstructed = nullptr,
           const std::vector<double>* reference = nullptr) {
    const std::size_t n = x.size();
    if (eta.size() != n || q.size() != n || reconstructed_ != (reconstructed != nullptr) ||
        reference_ != (reference != nullptr) || (reconstructed && reconstructed->size() != n) ||
        (reference && reference->size() != n))
      throw InvalidInput("snapshot: column size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      out_ << format_double(t) << ',' << format_double(x[i]) << ',' << format_double(eta[i]) << ',' << format_double(q[i]);
      if (reconstructed) out_ << ',' << format_double((*reconstructed)[i]);
      if (reference) out_ << ',' << format_double((*reference)[i]);
      out_ << '\n';
    }
  }

 private:
  std::ostream& out_;
  bool reconstructed_, reference_;
};

}  // namespace swhomog
