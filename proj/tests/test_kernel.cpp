#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ergokit/fuzz.hpp"
#include "ergokit/invariant.hpp"
#include "ergokit/kernel.hpp"
#include "ergokit/rng.hpp"
#include "oracles.hpp"

using namespace ergokit;

namespace {

StochasticKernel make(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return StochasticKernel::validate(std::move(m));
}

const StochasticKernel kCycle2 = make({{0, 1}, {1, 0}});
const StochasticKernel kUniform2 = make({{0.5, 0.5}, {0.5, 0.5}});
const StochasticKernel kLazy = make({{0.9, 0.1}, {0.2, 0.8}});

}  // namespace

TEST_CASE("kernel validation accepts stochastic matrices") {
  CHECK(make({{1}}).size() == 1);
  CHECK(kUniform2.size() == 2);
  StochasticKernel labeled = StochasticKernel::validate(
      Eigen::MatrixXd::Identity(2, 2), {"off", "on"});
  CHECK(labeled.labels()[1] == "on");
}

TEST_CASE("kernel validation rejects malformed input") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.4, 0.5, 0.5;
  CHECK_THROWS_WITH_AS(StochasticKernel::validate(bad),
                       doctest::Contains("row 0"), Error);
  try {
    StochasticKernel::validate(bad);
  } catch (const Error& e) {
    CHECK(e.code() == errc::row_sum_violation);
    CHECK_FALSE(e.internal());
  }

  Eigen::MatrixXd neg(2, 2);
  neg << 1.5, -0.5, 0.5, 0.5;
  CHECK_THROWS_AS(StochasticKernel::validate(neg), Error);

  Eigen::MatrixXd rect(1, 2);
  rect << 0.5, 0.5;
  CHECK_THROWS_AS(StochasticKernel::validate(rect), Error);

  Eigen::MatrixXd nan2 = Eigen::MatrixXd::Identity(2, 2);
  nan2(0, 0) = std::nan("");
  CHECK_THROWS_AS(StochasticKernel::validate(nan2), Error);

  CHECK_THROWS_AS(
      StochasticKernel::validate(Eigen::MatrixXd::Identity(2, 2), {"a"}),
      Error);
  CHECK_THROWS_AS(StochasticKernel::validate(Eigen::MatrixXd(0, 0)), Error);
}

TEST_CASE("arithmetic constructor takes drifted rows, validate does not") {
  Eigen::MatrixXd drift(2, 2);
  drift << 0.5, 0.5 + 3e-11, 0.25, 0.75;
  CHECK_THROWS_AS(StochasticKernel::validate(drift), Error);
  StochasticKernel fixed = StochasticKernel::from_arithmetic(drift);
  CHECK(fixed.matrix().row(0).sum() == doctest::Approx(1.0).epsilon(1e-14));
  Eigen::MatrixXd wild(2, 2);
  wild << 0.5, 0.6, 0.25, 0.75;
  CHECK_THROWS_AS(StochasticKernel::from_arithmetic(wild), Error);
}

TEST_CASE("row_mass sums the requested columns") {
  CHECK(kLazy.row_mass(0, StateSet::of(2, {0})) == 0.9);
  CHECK(kLazy.row_mass(1, StateSet::full(2)) == doctest::Approx(1.0));
  CHECK(kLazy.row_mass(0, StateSet(2)) == 0.0);
}

TEST_CASE("apply_left matches hand-computed products") {
  ProbMeasure mu = ProbMeasure::point_mass(0, 2);
  CHECK(apply_left(mu, StochasticKernel::identity(2))[0] == 1.0);
  CHECK(apply_left(mu, kCycle2)[1] == 1.0);

  ProbMeasure half = ProbMeasure::uniform(2);
  ProbMeasure out = apply_left(half, kLazy);
  CHECK(out[0] == doctest::Approx(0.55).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(0.45).epsilon(1e-14));
}

TEST_CASE("apply_right matches hand-computed products") {
  StateFunction ind0 = StateFunction::of(Eigen::Vector2d(1, 0));
  StateFunction c = StateFunction::of(Eigen::Vector2d(0.3, 0.3));
  CHECK(apply_right(kLazy, c)[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(apply_right(kLazy, c)[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(apply_right(kCycle2, ind0)[0] == 0.0);
  CHECK(apply_right(kCycle2, ind0)[1] == 1.0);
  StateFunction pf = apply_right(kLazy, ind0);
  CHECK(pf[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(pf[1] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("power handles the exponent laws") {
  CHECK(power(kLazy, 0).matrix().isIdentity(0.0));
  CHECK(power(kCycle2, 2).matrix().isIdentity(0.0));

  StochasticKernel drift = make({{0.5, 0.5}, {0, 1}});
  StochasticKernel p3 = power(drift, 3);
  CHECK(p3(0, 0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(p3(0, 1) == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(p3(1, 0) == 0.0);
  CHECK(p3(1, 1) == 1.0);

  Rng rng(411, 0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = rng.uniform_int(2, 8);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.2, 0.9));
    std::uint64_t a = static_cast<std::uint64_t>(rng.uniform_int(0, 6));
    std::uint64_t b = static_cast<std::uint64_t>(rng.uniform_int(0, 6));
    Eigen::MatrixXd lhs = power(p, a + b).matrix();
    Eigen::MatrixXd rhs = power(p, a).matrix() * power(p, b).matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("cesaro_average matches closed forms and the shift contraction") {
  CHECK(cesaro_average(kLazy, 1, 1)[1] == 1.0);
  ProbMeasure even = cesaro_average(kCycle2, 0, 4);
  CHECK(even[0] == 0.5);
  CHECK(even[1] == 0.5);
  ProbMeasure odd = cesaro_average(kCycle2, 0, 3);
  CHECK(odd[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(odd[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));

  // nu_n P - nu_n telescopes to (P^n - I) delta_x / n, so TV <= 1/n.
  Rng rng(412, 0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = rng.uniform_int(2, 9);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.2, 0.9));
    std::int64_t steps = rng.uniform_int(1, 60);
    ProbMeasure nu = cesaro_average(p, 0, steps);
    double shift =
        oracle::tv(apply_left(nu, p).weights(), nu.weights());
    CHECK(shift <= 1.0 / static_cast<double>(steps) + 1e-12);
  }
}

TEST_CASE("cesaro_average validates arguments") {
  CHECK_THROWS_AS(cesaro_average(kCycle2, 2, 3), Error);
  CHECK_THROWS_AS(cesaro_average(kCycle2, 0, 0), Error);
}

TEST_CASE("resolvent closed forms") {
  for (double a : {0.1, 0.5, 0.9}) {
    ResolventParams params;
    params.a = a;
    StochasticKernel r = resolvent(StochasticKernel::identity(3), params);
    CHECK((r.matrix() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
          1e-14);
  }

  ResolventParams half;
  half.a = 0.5;
  StochasticKernel r = resolvent(kCycle2, half);
  CHECK(std::abs(r(0, 0) - 2.0 / 3) <= 1e-12);
  CHECK(std::abs(r(0, 1) - 1.0 / 3) <= 1e-12);
  CHECK(std::abs(r(1, 0) - 1.0 / 3) <= 1e-12);
  CHECK(std::abs(r(1, 1) - 2.0 / 3) <= 1e-12);

  StochasticKernel absorb = make({{1, 0}, {0.5, 0.5}});
  StochasticKernel ra = resolvent(absorb, half);
  CHECK(ra(1, 0) > 0.0);
  CHECK(ra(0, 1) == 0.0);  // exact structural zero
}

TEST_CASE("resolvent series mode approaches the closed form") {
  ResolventParams closed;
  closed.a = 0.6;
  ResolventParams series;
  series.a = 0.6;
  series.closed_form = false;
  series.series_terms = 40;
  double tail = resolvent_tail_bound(series);
  CHECK(tail == doctest::Approx(std::pow(0.6, 40)).epsilon(1e-12));

  Rng rng(413, 0);
  for (int trial = 0; trial < 10; ++trial) {
    StochasticKernel p = random_kernel(rng, rng.uniform_int(2, 8),
                                       rng.uniform(0.3, 0.9));
    Eigen::MatrixXd gap =
        resolvent(p, closed).matrix() - resolvent(p, series).matrix();
    CHECK(gap.cwiseAbs().maxCoeff() <= 2 * tail + 1e-12);
  }
}

TEST_CASE("resolvent parameter validation") {
  ResolventParams bad;
  bad.a = 1.0;
  CHECK_THROWS_AS(bad.check(), Error);
  bad.a = 0.0;
  CHECK_THROWS_AS(bad.check(), Error);
  bad.a = 0.5;
  bad.closed_form = false;
  bad.series_terms = 0;
  CHECK_THROWS_AS(bad.check(), Error);
}

TEST_CASE("resolvent support equals reachability, invariance transfers") {
  Rng rng(414, 0);
  ResolventParams params;
  params.a = 0.5;
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform_int(2, 10);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.15, 0.9));
    StochasticKernel r = resolvent(p, params);
    auto seen = oracle::reachable(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK((r(i, j) > 0.0) == seen[i][j]);
    for (const ProbMeasure& mu : ergodic_measures(p))
      CHECK(is_invariant(r, mu, 1e-9));
    for (const ProbMeasure& mu : ergodic_measures(r))
      CHECK(is_invariant(p, mu, 1e-9));
  }
}

TEST_CASE("reachability_closure agrees with BFS oracle") {
  Rng rng(415, 0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform_int(2, 11);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.15, 0.9));
    auto lib = reachability_closure(p);
    auto ref = oracle::reachable(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(lib[i].contains(j) == ref[i][j]);
  }
}
