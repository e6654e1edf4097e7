#include "msaccel/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace msaccel {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : trace) {
    out += std::to_string(r.t);
    for (double v : {r.f, r.gap, r.a_big, r.lambda, r.lambda_prime}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(r.up_flag);
    for (double v : {r.e_term, r.d_term, r.n_term}) {
      out += ',';
      out += format_double(v);
    }
    for (std::int64_t v :
         {r.counters.hessian_evals, r.counters.linear_solves, r.counters.hvps,
          r.counters.gradient_evals}) {
      out += ',';
      out += std::to_string(v);
    }
    out += ',';
    out += format_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> trace_from_csv(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line) || line != kTraceHeader)
    throw Error(ErrorKind::audit_input, "trace CSV: unexpected header");
  std::vector<TraceRecord> trace;
  int line_no = 1;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> fields;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    if (fields.size() != 15)
      throw Error(ErrorKind::audit_input,
                  "trace CSV: wrong field count at line " +
                      std::to_string(line_no));
    try {
      TraceRecord r;
      std::size_t i = 0;
      r.t = std::stoll(fields[i++]);
      r.f = std::stod(fields[i++]);
      r.gap = std::stod(fields[i++]);
      r.a_big = std::stod(fields[i++]);
      r.lambda = std::stod(fields[i++]);
      r.lambda_prime = std::stod(fields[i++]);
      r.up_flag = std::stoi(fields[i++]);
      r.e_term = std::stod(fields[i++]);
      r.d_term = std::stod(fields[i++]);
      r.n_term = std::stod(fields[i++]);
      r.counters.hessian_evals = std::stoll(fields[i++]);
      r.counters.linear_solves = std::stoll(fields[i++]);
      r.counters.hvps = std::stoll(fields[i++]);
      r.counters.gradient_evals = std::stoll(fields[i++]);
      r.wall_ms = std::stod(fields[i++]);
      trace.push_back(r);
    } catch (const std::exception&) {
      throw Error(ErrorKind::audit_input,
                  "trace CSV: bad value at line " + std::to_string(line_no));
    }
  }
  return trace;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::config, "cannot open for writing: " + path);
  out << text;
  if (!out) throw Error(ErrorKind::config, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace msaccel
