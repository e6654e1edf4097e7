#include "msaccel/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>
#include <vector>

#include "msaccel/prng.hpp"

namespace msaccel {

namespace {

struct RawExample {
  double label = 0.0;
  std::vector<std::pair<int, double>> pairs;  // 1-based, strictly increasing
};

[[noreturn]] void parse_fail(int line_no, const std::string& msg) {
  throw Error(ErrorKind::parse,
              "libsvm parse error at line " + std::to_string(line_no) + ": " +
                  msg);
}

double parse_label(std::string_view tok, int line_no) {
  if (tok == "+1" || tok == "1") return 1.0;
  if (tok == "-1" || tok == "0") return -1.0;
  parse_fail(line_no, "unrecognized label '" + std::string(tok) + "'");
}

}  // namespace

Dataset parse_libsvm(const std::string& text) {
  std::vector<RawExample> examples;
  int max_index = 0;

  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream toks(line);
    std::string tok;
    if (!(toks >> tok)) continue;  // blank line
    RawExample ex;
    ex.label = parse_label(tok, line_no);
    int prev_index = 0;
    while (toks >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        parse_fail(line_no, "expected index:value, got '" + tok + "'");
      int index = 0;
      const char* ib = tok.data();
      auto ir = std::from_chars(ib, ib + colon, index);
      if (ir.ec != std::errc() || ir.ptr != ib + colon || index < 1)
        parse_fail(line_no, "bad feature index in '" + tok + "'");
      if (index <= prev_index)
        parse_fail(line_no, "indices not strictly increasing at '" + tok + "'");
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(tok.substr(colon + 1), &used);
        if (used != tok.size() - colon - 1) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        parse_fail(line_no, "bad feature value in '" + tok + "'");
      }
      if (!std::isfinite(value))
        parse_fail(line_no, "non-finite feature value in '" + tok + "'");
      ex.pairs.emplace_back(index, value);
      prev_index = index;
      max_index = std::max(max_index, index);
    }
    examples.push_back(std::move(ex));
  }
  if (examples.empty()) throw Error(ErrorKind::parse, "empty libsvm input");

  Dataset data;
  data.features = Matrix::Zero(static_cast<Eigen::Index>(examples.size()),
                               max_index);
  data.labels.resize(static_cast<Eigen::Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    data.labels[static_cast<Eigen::Index>(i)] = examples[i].label;
    for (const auto& [index, value] : examples[i].pairs)
      data.features(static_cast<Eigen::Index>(i), index - 1) = value;
  }
  return data;
}

std::string write_libsvm(const Dataset& data) {
  std::string out;
  char buf[64];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out += data.labels[i] > 0 ? "+1" : "-1";
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      const double v = data.features(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), " %lld:%.17g",
                    static_cast<long long>(j + 1), v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Dataset normalize_rows(const Dataset& data, int* zero_rows) {
  Dataset out = data;
  int zeros = 0;
  for (Eigen::Index i = 0; i < out.n(); ++i) {
    const double norm = out.features.row(i).norm();
    if (norm == 0.0) {
      ++zeros;
      continue;
    }
    out.features.row(i) /= norm;
  }
  if (zero_rows) *zero_rows = zeros;
  return out;
}

Dataset synthetic_gaussian(int n, int d, std::uint64_t seed) {
  if (n <= 0 || n % 2 != 0)
    throw Error(ErrorKind::invalid_input,
                "synthetic_gaussian needs a positive even n");
  if (d < 1)
    throw Error(ErrorKind::invalid_input, "synthetic_gaussian needs d >= 1");

  SplitMix64 rng(seed);
  auto draw_vec = [&](Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  };

  Vector mu1(d), mu2(d);
  draw_vec(mu1);
  mu1 *= 0.5 / mu1.norm();
  draw_vec(mu2);
  mu2 *= 0.5 / mu2.norm();

  Dataset data;
  data.features.resize(n, d);
  data.labels.resize(n);
  Vector noise(d);
  for (int i = 0; i < n; ++i) {
    draw_vec(noise);
    const bool first_half = i < n / 2;
    data.features.row(i) = ((first_half ? mu1 : mu2) + noise).transpose();
    data.labels[i] = first_half ? 1.0 : -1.0;
  }
  return normalize_rows(data);
}

}  // namespace msaccel
