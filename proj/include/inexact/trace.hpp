#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "inexact/linalg.hpp"

namespace inexact {

struct IterationRecord {
  std::size_t k = 0;
  double f_val = 0.0;
  double grad_norm = 0.0;  // ||g^k|| for IGD-family runs, a residual for baselines
  double eps_k = 0.0;
  int i_k = 0;
  std::size_t inner_iters = 0;
  double elapsed = 0.0;  // seconds since solve start
};

struct IterationTrace {
  std::string method;
  std::map<std::string, std::string> metadata;
  std::vector<IterationRecord> records;
  /// x^k for each record, filled only when a solver is asked to keep iterates.
  std::vector<Vector> iterates;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const IterationRecord& back() const { return records.back(); }
  std::size_t total_inner_iters() const;
};

class TraceOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Appends rec; rec.k must be 1 for an empty trace and last k + 1 otherwise.
void record_iteration(IterationTrace& trace, const IterationRecord& rec);

enum class TimingMode { Wall, Off };

/// Header row of the per-iteration CSV.
inline constexpr const char* kTraceCsvHeader = "k,f_val,grad_norm,eps_k,i_k,inner_iters,elapsed_s";

/**
 * Writes `# metadata: key=value;...` followed by the CSV header and one row
 * per record. With TimingMode::Off the elapsed column is written as 0 so
 * that bodies are byte-identical across repeated runs.
 */
void write_trace_csv(std::ostream& out, const IterationTrace& trace,
                     TimingMode timing = TimingMode::Wall);
void write_trace_csv(const std::string& path, const IterationTrace& trace,
                     TimingMode timing = TimingMode::Wall);

/// Parses a file produced by write_trace_csv; throws std::runtime_error on schema mismatch.
IterationTrace read_trace_csv(std::istream& in);

/// Shortest round-trip decimal text of a double (std::to_chars).
std::string format_double(double v);

}  // namespace inexact
