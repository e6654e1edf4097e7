#pragma once

#include <cstdint>
#include <string>

#include "msaccel/types.hpp"

namespace msaccel {

// Binary classification data: row i of `features` is the feature vector
// phi_i, `labels[i]` is its label in {-1, +1}.
struct Dataset {
  Matrix features;  // n x d
  Vector labels;    // n

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index d() const { return features.cols(); }
};

// Parses LIBSVM text: one example per line, "label idx:val idx:val ...",
// 1-based strictly increasing indices. Labels "+1"/"1" map to +1 and
// "-1"/"0" to -1. The dense width is the maximum index seen anywhere in the
// file; absent entries are zero. Malformed lines raise a parse Error that
// names the line number.
Dataset parse_libsvm(const std::string& text);

// Inverse of parse_libsvm on the dense representation (zeros are omitted).
std::string write_libsvm(const Dataset& data);

// Scales every nonzero row to unit Euclidean norm. Zero rows are left
// untouched; their count is reported through `zero_rows` when given.
Dataset normalize_rows(const Dataset& data, int* zero_rows = nullptr);

// Two-cluster Gaussian data: n/2 points labeled +1 around mu1 and n/2
// labeled -1 around mu2, where mu1, mu2 are drawn uniformly from the sphere
// of radius 0.5 (a Gaussian vector rescaled to that radius). Draw order is
// mu1, mu2, then the rows in order, all from one SplitMix64 stream; rows are
// then unit-normalized. Pure function of (n, d, seed).
Dataset synthetic_gaussian(int n, int d, std::uint64_t seed);

}  // namespace msaccel
