#include "inexact/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace inexact {

std::size_t IterationTrace::total_inner_iters() const {
  std::size_t total = 0;
  for (const auto& r : records) total += r.inner_iters;
  return total;
}

void record_iteration(IterationTrace& trace, const IterationRecord& rec) {
  const std::size_t expected = trace.records.empty() ? 1 : trace.records.back().k + 1;
  if (rec.k != expected) {
    throw TraceOrderError("record_iteration: expected k=" + std::to_string(expected) +
                          ", got k=" + std::to_string(rec.k));
  }
#ifndef NDEBUG
  if (rec.grad_norm < 0.0 || rec.i_k < 0 || !(rec.eps_k >= 0.0)) {
    throw TraceOrderError("record_iteration: negative norm, i_k or eps_k");
  }
#endif
  trace.records.push_back(rec);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace, TimingMode timing) {
  out << "# metadata: method=" << trace.method;
  for (const auto& [key, value] : trace.metadata) out << ';' << key << '=' << value;
  out << '\n' << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_double(r.f_val) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.eps_k) << ',' << r.i_k << ',' << r.inner_iters << ','
        << format_double(timing == TimingMode::Wall ? r.elapsed : 0.0) << '\n';
  }
}

void write_trace_csv(const std::string& path, const IterationTrace& trace, TimingMode timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_trace_csv(out, trace, timing);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("trace csv: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

IterationTrace read_trace_csv(std::istream& in) {
  IterationTrace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# metadata: ", 0) != 0) {
    throw std::runtime_error("trace csv: missing '# metadata:' line");
  }
  std::stringstream meta(line.substr(12));
  std::string item;
  while (std::getline(meta, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "method") {
      trace.method = value;
    } else {
      trace.metadata[key] = value;
    }
  }
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw std::runtime_error(std::string("trace csv: expected header '") + kTraceCsvHeader + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    while (std::getline(row, item, ',')) cells.push_back(item);
    if (cells.size() != 7) throw std::runtime_error("trace csv: expected 7 columns: " + line);
    IterationRecord r;
    r.k = static_cast<std::size_t>(std::stoull(cells[0]));
    r.f_val = parse_double(cells[1]);
    r.grad_norm = parse_double(cells[2]);
    r.eps_k = parse_double(cells[3]);
    r.i_k = std::stoi(cells[4]);
    r.inner_iters = static_cast<std::size_t>(std::stoull(cells[5]));
    r.elapsed = parse_double(cells[6]);
    record_iteration(trace, r);
  }
  return trace;
}

}  // namespace inexact
