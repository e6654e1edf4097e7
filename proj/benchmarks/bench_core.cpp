#include <benchmark/benchmark.h>

#include <cmath>

#include "msaccel/linalg.hpp"
#include "msaccel/objective.hpp"
#include "msaccel/oracle.hpp"

namespace {

using namespace msaccel;

Dataset bench_data(int n, int d) { return synthetic_gaussian(n, d, 7); }

void BM_logistic_gradient(benchmark::State& state) {
  const auto obj = make_logistic(bench_data(500, static_cast<int>(state.range(0))));
  const Vector x = Vector::Constant(obj->dim(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(obj->gradient(x));
}
BENCHMARK(BM_logistic_gradient)->Arg(50)->Arg(200);

void BM_reg_newton_step(benchmark::State& state) {
  const auto obj = make_logistic(bench_data(500, static_cast<int>(state.range(0))));
  const Vector x = Vector::Constant(obj->dim(), 0.1);
  const Matrix h = obj->hessian(x);
  const Vector g = obj->gradient(x);
  for (auto _ : state) benchmark::DoNotOptimize(reg_newton_step(h, g, 1e-3));
}
BENCHMARK(BM_reg_newton_step)->Arg(50)->Arg(200);

void BM_conj_res(benchmark::State& state) {
  const auto obj = make_worst_case(static_cast<int>(state.range(0)));
  Vector x(obj->dim());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = 0.5 + 0.2 * std::sin(static_cast<double>(i));
  const Vector b = -obj->gradient(x);
  auto apply = [&](const Vector& v) {
    return Vector(obj->hvp(x, v) + 1e-2 * v);
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(
        conj_res(apply, b, 5e-3, conj_res_default_cap(obj->dim())));
}
BENCHMARK(BM_conj_res)->Arg(100)->Arg(300);

void BM_amsn_call(benchmark::State& state) {
  const auto obj = make_logistic(bench_data(500, 200));
  const Vector y = Vector::Zero(obj->dim());
  for (auto _ : state)
    benchmark::DoNotOptimize(amsn(*obj, y, 0.1, 0.5, /*lazy=*/true));
}
BENCHMARK(BM_amsn_call);

}  // namespace

BENCHMARK_MAIN();
