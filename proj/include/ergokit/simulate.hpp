#ifndef ERGOKIT_SIMULATE_HPP
#define ERGOKIT_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "ergokit/invariant.hpp"
#include "ergokit/kernel.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

// A sampled path X_0, ..., X_{n-1}. Consecutive states always have
// P(X_k, X_{k+1}) > 0.
struct Trajectory {
  std::vector<std::int32_t> states;
  std::uint64_t seed = 0;
  std::int32_t start = 0;
};

// Simulates n steps from x. Step k draws u = uniform(seed, k) and inverts
// the row CDF; round-off past the last positive entry clamps to it, so the
// path never leaves the support. Bit-exact reproducible from (P, x, n, seed).
Trajectory sample_path(const StochasticKernel& p, int x, std::int64_t n,
                       std::uint64_t seed);

// Empirical state frequencies of a trajectory (counts / length).
ProbMeasure occupation_measure(const Trajectory& traj, int n_states);

// Total variation distance (1/2) || mu - nu ||_1.
double tv_distance(const ProbMeasure& mu, const ProbMeasure& nu);

// Comparison of a trajectory time average against the invariant-measure
// integral. Pure measurement; no embedded pass/fail.
struct StabilityReport {
  StateFunction observable;
  double time_average;
  double target;    // <pi, f> for the unique invariant measure
  double abs_error; // |time_average - target|
  std::int64_t n;
  std::uint64_t seed;
};

// Requires a kernel with a unique invariant measure (not_unique otherwise).
StabilityReport duflo_check(const StochasticKernel& p, const StateFunction& f,
                            int x, std::int64_t n, std::uint64_t seed);

// tv_k = TV( (1/k) sum_{j<k} delta_x P^j , pi ) for k = 1..n_max, computed
// by exact vector arithmetic (no sampling; reruns give identical floats).
// Requires a unique invariant measure.
struct CurvePoint {
  std::int64_t n;
  double tv;
};

std::vector<CurvePoint> cesaro_tv_curve(const StochasticKernel& p, int x,
                                        std::int64_t n_max);

// Uniform-minorization contraction diagnostic. Validates the minorization
// P(i,j) >= eps * nu(j) entrywise (minorization_violated at 1e-12 slack),
// then tracks max_x TV(P^n(x,.), pi) against the geometric bound (1-eps)^n.
struct DoeblinPoint {
  std::int64_t n;
  double tv;     // max over start states
  double bound;  // (1 - eps)^n
};

struct DoeblinReport {
  double eps = 0.0;
  std::vector<DoeblinPoint> curve;
  bool bound_satisfied = true;      // tv <= bound + 1e-9 at every n
  std::int64_t first_violation = -1;
};

DoeblinReport doeblin_rate_check(const StochasticKernel& p, double eps,
                                 const ProbMeasure& nu, std::int64_t n_max);

}  // namespace ergokit

#endif  // ERGOKIT_SIMULATE_HPP
