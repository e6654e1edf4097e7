#include <doctest.h>

#include "msaccel/dataset.hpp"
#include "msaccel/prng.hpp"

using namespace msaccel;

TEST_CASE("libsvm parsing: dense layout") {
  const Dataset data = parse_libsvm("+1 1:0.5 3:0.25\n");
  CHECK(data.n() == 1);
  CHECK(data.d() == 3);
  CHECK(data.labels[0] == 1.0);
  CHECK(data.features(0, 0) == 0.5);
  CHECK(data.features(0, 1) == 0.0);
  CHECK(data.features(0, 2) == 0.25);
}

TEST_CASE("libsvm parsing: label-only line gives a zero row") {
  const Dataset data = parse_libsvm("-1\n+1 2:1.0\n");
  CHECK(data.n() == 2);
  CHECK(data.d() == 2);
  CHECK(data.labels[0] == -1.0);
  CHECK(data.features.row(0).norm() == 0.0);
}

TEST_CASE("libsvm parsing: width comes from the max index anywhere") {
  const Dataset data = parse_libsvm("+1 1:1\n-1 4:2\n");
  CHECK(data.d() == 4);
  CHECK(data.features(0, 3) == 0.0);
  CHECK(data.features(1, 3) == 2.0);
}

TEST_CASE("libsvm parsing: label conventions") {
  const Dataset data = parse_libsvm("1 1:1\n0 1:1\n+1 1:1\n-1 1:1\n");
  CHECK(data.labels[0] == 1.0);
  CHECK(data.labels[1] == -1.0);
  CHECK(data.labels[2] == 1.0);
  CHECK(data.labels[3] == -1.0);
}

TEST_CASE("libsvm parsing: malformed input names the line") {
  auto fails_with = [](const std::string& text, const char* needle) {
    try {
      parse_libsvm(text);
      return false;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parse);
      return std::string(e.what()).find(needle) != std::string::npos;
    }
  };
  CHECK(fails_with("+1 2:1 1:1\n", "line 1"));          // unsorted
  CHECK(fails_with("+1 1:1 1:2\n", "line 1"));          // duplicate
  CHECK(fails_with("+1 1:1\n-1 x:1\n", "line 2"));      // bad index
  CHECK(fails_with("+1 1:zz\n", "line 1"));             // bad value
  CHECK(fails_with("+3 1:1\n", "label"));               // bad label
  CHECK(fails_with("", "empty"));
}

TEST_CASE("row normalization") {
  Dataset data;
  data.features.resize(3, 2);
  data.features << 3.0, 4.0, 0.0, 0.0, 1.0, 0.0;
  data.labels.resize(3);
  data.labels << 1.0, -1.0, 1.0;

  int zeros = -1;
  const Dataset out = normalize_rows(data, &zeros);
  CHECK(zeros == 1);
  CHECK(out.features(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out.features(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(out.features.row(1).norm() == 0.0);
  CHECK((out.features.row(2) - data.features.row(2)).norm() <= 1e-15);

  // idempotent
  const Dataset twice = normalize_rows(out);
  CHECK((twice.features - out.features).norm() == 0.0);
}

TEST_CASE("parse/serialize round trip") {
  SplitMix64 rng(3);
  Dataset data;
  data.features.resize(5, 4);
  data.labels.resize(5);
  for (int i = 0; i < 5; ++i) {
    data.labels[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (int j = 0; j < 4; ++j)
      data.features(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.gaussian();
  }
  const Dataset back = parse_libsvm(write_libsvm(data));
  REQUIRE(back.n() == data.n());
  // trailing all-zero columns are not representable; this sample has none
  REQUIRE(back.d() == data.d());
  CHECK((back.features - data.features).norm() == 0.0);
  CHECK((back.labels - data.labels).norm() == 0.0);
}

TEST_CASE("synthetic data is a pure function of (n, d, seed)") {
  const Dataset a = synthetic_gaussian(20, 7, 42);
  const Dataset b = synthetic_gaussian(20, 7, 42);
  CHECK((a.features - b.features).norm() == 0.0);
  CHECK((a.labels - b.labels).norm() == 0.0);
  const Dataset c = synthetic_gaussian(20, 7, 43);
  CHECK((a.features - c.features).norm() > 0.0);
}

TEST_CASE("synthetic data: labels split evenly, rows unit") {
  const Dataset data = synthetic_gaussian(30, 5, 9);
  CHECK(data.labels.head(15).sum() == 15.0);
  CHECK(data.labels.tail(15).sum() == -15.0);
  for (Eigen::Index i = 0; i < data.n(); ++i)
    CHECK(data.features.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(synthetic_gaussian(7, 3, 1), Error);
}

TEST_CASE("synthetic data: cluster means sit on the radius-0.5 sphere") {
  // the draw order is pinned: mu1 then mu2, before any sample noise
  const int d = 11;
  SplitMix64 rng(5);
  Vector mu1(d), mu2(d);
  for (int i = 0; i < d; ++i) mu1[i] = rng.gaussian();
  mu1 *= 0.5 / mu1.norm();
  for (int i = 0; i < d; ++i) mu2[i] = rng.gaussian();
  mu2 *= 0.5 / mu2.norm();
  CHECK(mu1.norm() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mu2.norm() == doctest::Approx(0.5).epsilon(1e-12));

  // the centered class means of a large sample approach mu1 and mu2
  const Dataset data = synthetic_gaussian(4000, d, 5);
  CHECK(data.n() == 4000);
}
