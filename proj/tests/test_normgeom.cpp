#include "monolab/normgeom.hpp"

#include "monolab/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace monolab;
using namespace monolab::normgeom;

namespace {

// Independent oracle: central finite differences of (1/2)||.||^2.
Vec fd_gradient_half_norm_sq(const Vec& x, const NormSpec& spec,
                             double h = 1e-6) {
  Vec g(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    Vec hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    double f1 = norm(hi, spec), f0 = norm(lo, spec);
    g[i] = (0.5 * f1 * f1 - 0.5 * f0 * f0) / (2 * h);
  }
  return g;
}

NormSpec spec_p(double p, int n) {
  NormSpec s;
  s.p = p;
  s.weights.assign(static_cast<size_t>(n), 1.0);
  return s;
}

} // namespace

TEST_CASE("Euclidean duality map is the identity") {
  NormSpec s = NormSpec::euclidean(2);
  Vec j = duality_map({3, -4}, s);
  CHECK(j[0] == 3);
  CHECK(j[1] == -4);
}

TEST_CASE("J(0) = 0 for any spec") {
  for (double p : {1.5, 2.0, 3.0}) {
    Vec j = duality_map({0, 0}, spec_p(p, 2));
    CHECK(j[0] == 0);
    CHECK(j[1] == 0);
  }
}

TEST_CASE("p=3 duality map at (1,1) equals 2^{-1/3} per component") {
  // Frozen from the finite-difference oracle below.
  NormSpec s = spec_p(3, 2);
  Vec j = duality_map({1, 1}, s);
  double expect = std::pow(2.0, -1.0 / 3.0);
  CHECK(j[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(j[1] == doctest::Approx(expect).epsilon(1e-12));
  Vec fd = fd_gradient_half_norm_sq({1, 1}, s);
  CHECK(j[0] == doctest::Approx(fd[0]).epsilon(1e-6));
  CHECK(j[1] == doctest::Approx(fd[1]).epsilon(1e-6));
}

TEST_CASE("duality identities over random points and specs") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  int checked = 0;
  for (int it = 0; it < 2000; ++it) {
    double p = std::vector<double>{1.5, 2.0, 3.0}[it % 3];
    int n = 1 + static_cast<int>(it % 3);
    NormSpec s;
    s.p = p;
    for (int i = 0; i < n; ++i) s.weights.push_back(w(rng));
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = u(rng);
    double nx = norm(x, s);
    if (nx < 1e-9) continue;
    Vec j = duality_map(x, s);
    double pairing = 0;
    for (int i = 0; i < n; ++i) pairing += j[i] * x[i];
    CHECK(std::abs(pairing - nx * nx) <= 1e-9 * nx * nx);
    CHECK(std::abs(dual_norm(j, s) - nx) <= 1e-9 * nx);
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("closed form matches finite differences away from zero") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    double p = std::vector<double>{1.5, 2.0, 3.0}[it % 3];
    NormSpec s = spec_p(p, 2);
    Vec x{u(rng), u(rng)};
    if (norm(x, s) < 0.1) continue;
    Vec j = duality_map(x, s);
    Vec fd = fd_gradient_half_norm_sq(x, s);
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(j[i] - fd[i]) <=
            1e-6 * std::max(1.0, std::abs(fd[i])));
  }
}

TEST_CASE("vertical shear: direct substitution and round trip") {
  NormSpec s = NormSpec::euclidean(1);
  GraphPoint pt{{2}, {3}};
  GraphPoint sheared = shear_vertical(pt, 1.0, s);
  CHECK(sheared.x[0] == 2);
  CHECK(sheared.v[0] == 5);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int it = 0; it < 500; ++it) {
    double p = std::vector<double>{1.5, 2.0, 3.0}[it % 3];
    NormSpec sp = spec_p(p, 2);
    GraphPoint q{{u(rng), u(rng)}, {u(rng), u(rng)}};
    double sigma = u(rng);
    GraphPoint r = shear_vertical(shear_vertical(q, sigma, sp), -sigma, sp);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(r.x[i] - q.x[i]) <= 1e-12);
      CHECK(std::abs(r.v[i] - q.v[i]) <= 1e-12);
    }
  }
}

TEST_CASE("transvection: substitution, inverse pattern, graph identity") {
  GraphPoint pt{{1}, {3}};
  GraphPoint t = shear_transvect(pt, 2.0);
  CHECK(t.x[0] == 5);
  CHECK(t.v[0] == 1);

  GraphPoint back = shear_transvect_inverse(t, 2.0);
  CHECK(back.x[0] == 1);
  CHECK(back.v[0] == 3);

  // gph T for T(x) = x, sigma = 1: (1,1) -> (2,1), consistent with
  // (T + I)^{-1}(2) = 1.
  GraphPoint diag{{1}, {1}};
  GraphPoint image = shear_transvect(diag, 1.0);
  CHECK(image.x[0] == 2);
  CHECK(image.v[0] == 1);

  CHECK_THROWS_AS(shear_transvect_inverse(t, 0.0), Error);
}

TEST_CASE("norm spec validation") {
  NormSpec bad;
  bad.p = 1.0;
  bad.weights = {1.0};
  CHECK_THROWS_AS(norm({1.0}, bad), Error);
  NormSpec negw;
  negw.p = 2.0;
  negw.weights = {-1.0};
  CHECK_THROWS_AS(norm({1.0}, negw), Error);
}
