// Benchmark of the OpenMP pair-scan kernels against their serial references
// on synthetic sampled graphs.

#include "monolab/kernels.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using monolab::GraphPoint;
using monolab::NormSpec;

namespace {

std::vector<GraphPoint> synthetic_graph(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<GraphPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x0 = u(rng), x1 = u(rng);
    pts.push_back({{x0, x1}, {2 * x0 + 0.1 * u(rng), 5 * x1 + 0.1 * u(rng)}});
  }
  return pts;
}

template <typename F>
double time_ms(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel variants run serially\n");
#endif
  NormSpec spec = NormSpec::euclidean(2);
  std::printf("%-22s %8s %12s %12s %8s\n", "kernel", "points", "serial ms",
              "parallel ms", "speedup");
  for (std::size_t n : {1000u, 2000u, 4000u}) {
    auto pts = synthetic_graph(n, 42);
    int reps = n <= 2000 ? 5 : 3;

    auto s1 = time_ms([&] { monolab::kernels::min_pair_inner_serial(pts); }, reps);
    auto p1 = time_ms([&] { monolab::kernels::min_pair_inner(pts); }, reps);
    std::printf("%-22s %8zu %12.2f %12.2f %8.2f\n", "min_pair_inner", n, s1, p1,
                s1 / p1);

    auto s2 = time_ms(
        [&] { monolab::kernels::min_strong_ratio_serial(pts, spec); }, reps);
    auto p2 =
        time_ms([&] { monolab::kernels::min_strong_ratio(pts, spec); }, reps);
    std::printf("%-22s %8zu %12.2f %12.2f %8.2f\n", "min_strong_ratio", n, s2,
                p2, s2 / p2);

    auto s3 = time_ms([&] { monolab::kernels::max_hypo_ratio_serial(pts); }, reps);
    auto p3 = time_ms([&] { monolab::kernels::max_hypo_ratio(pts); }, reps);
    std::printf("%-22s %8zu %12.2f %12.2f %8.2f\n", "max_hypo_ratio", n, s3, p3,
                s3 / p3);

    auto cands = synthetic_graph(n / 2, 7);
    auto s4 = time_ms(
        [&] { monolab::kernels::extension_margin_serial(cands, pts); }, reps);
    auto p4 =
        time_ms([&] { monolab::kernels::extension_margin(cands, pts); }, reps);
    std::printf("%-22s %8zu %12.2f %12.2f %8.2f\n", "extension_margin", n, s4,
                p4, s4 / p4);
  }
  return 0;
}
