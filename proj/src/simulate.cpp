#include "ergokit/simulate.hpp"

#include <cmath>
#include <sstream>

namespace ergokit {

namespace {

// Inverse-CDF draw from a kernel row. When round-off pushes u past the
// accumulated total, the draw clamps to the last positive entry, so sampled
// transitions always stay inside the support.
int draw_from_row(const StochasticKernel& p, int i, double u) {
  const int n = p.size();
  double cum = 0.0;
  int last_positive = -1;
  for (int j = 0; j < n; ++j) {
    double v = p(i, j);
    if (v > 0.0) {
      cum += v;
      last_positive = j;
      if (u < cum) return j;
    }
  }
  return last_positive;  // row sums to 1, so at least one entry is positive
}

ProbMeasure unique_invariant_measure(const StochasticKernel& p) {
  UniquenessCertificate cert = uniqueness_certificate(p);
  if (cert.verdict != UniquenessCertificate::Verdict::kUnique)
    throw Error(errc::not_unique,
                "kernel has multiple invariant measures");
  return *cert.unique_measure;
}

}  // namespace

Trajectory sample_path(const StochasticKernel& p, int x, std::int64_t n,
                       std::uint64_t seed) {
  if (x < 0 || x >= p.size())
    throw Error(errc::invalid_state, "start state " + std::to_string(x));
  if (n < 1) throw Error(errc::out_of_range, "path length must be >= 1");
  CounterRng rng = CounterRng::keyed(seed);
  Trajectory traj;
  traj.seed = seed;
  traj.start = x;
  traj.states.resize(static_cast<std::size_t>(n));
  std::int32_t state = static_cast<std::int32_t>(x);
  traj.states[0] = state;
  for (std::int64_t k = 1; k < n; ++k) {
    // Draw k-1 moves X_{k-1} -> X_k; a pure function of (seed, k-1).
    double u = rng.uniform(static_cast<std::uint64_t>(k - 1));
    state = static_cast<std::int32_t>(draw_from_row(p, state, u));
    traj.states[k] = state;
  }
  return traj;
}

ProbMeasure occupation_measure(const Trajectory& traj, int n_states) {
  if (traj.states.empty())
    throw Error(errc::out_of_range, "empty trajectory");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_states);
  for (std::int32_t s : traj.states) {
    if (s < 0 || s >= n_states)
      throw Error(errc::invalid_state, "trajectory state out of range");
    counts[s] += 1.0;
  }
  return ProbMeasure::from_computation(counts /
                                       static_cast<double>(traj.states.size()));
}

double tv_distance(const ProbMeasure& mu, const ProbMeasure& nu) {
  if (mu.size() != nu.size())
    throw Error(errc::dimension_mismatch, "measures over different spaces");
  return 0.5 * (mu.weights() - nu.weights()).cwiseAbs().sum();
}

StabilityReport duflo_check(const StochasticKernel& p, const StateFunction& f,
                            int x, std::int64_t n, std::uint64_t seed) {
  if (f.size() != p.size())
    throw Error(errc::dimension_mismatch, "observable size vs kernel size");
  ProbMeasure pi = unique_invariant_measure(p);

  // Stream the path instead of materializing it: n can be large.
  if (x < 0 || x >= p.size())
    throw Error(errc::invalid_state, "start state " + std::to_string(x));
  if (n < 1) throw Error(errc::out_of_range, "path length must be >= 1");
  CounterRng rng = CounterRng::keyed(seed);
  int state = x;
  double sum = f[state];
  for (std::int64_t k = 1; k < n; ++k) {
    double u = rng.uniform(static_cast<std::uint64_t>(k - 1));
    state = draw_from_row(p, state, u);
    sum += f[state];
  }
  double time_average = sum / static_cast<double>(n);
  double target = pi.weights().dot(f.values());
  return StabilityReport{f,        time_average, target,
                         std::abs(time_average - target), n, seed};
}

std::vector<CurvePoint> cesaro_tv_curve(const StochasticKernel& p, int x,
                                        std::int64_t n_max) {
  if (x < 0 || x >= p.size())
    throw Error(errc::invalid_state, "start state " + std::to_string(x));
  if (n_max < 1) throw Error(errc::out_of_range, "need at least one point");
  ProbMeasure pi = unique_invariant_measure(p);

  const int n = p.size();
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);  // delta_x P^k
  row[x] = 1.0;
  Eigen::RowVectorXd acc = row;
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t k = 1; k <= n_max; ++k) {
    double tv =
        0.5 * (acc.transpose() / static_cast<double>(k) - pi.weights())
                  .cwiseAbs()
                  .sum();
    curve.push_back({k, tv});
    if (k < n_max) {
      row = row * p.matrix();
      acc += row;
    }
  }
  return curve;
}

DoeblinReport doeblin_rate_check(const StochasticKernel& p, double eps,
                                 const ProbMeasure& nu, std::int64_t n_max) {
  const int n = p.size();
  if (nu.size() != n)
    throw Error(errc::dimension_mismatch, "reference measure vs kernel size");
  if (!(eps > 0.0) || eps > 1.0 || !std::isfinite(eps))
    throw Error(errc::out_of_range, "minorization weight outside (0, 1]");
  if (n_max < 1) throw Error(errc::out_of_range, "need at least one step");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (p(i, j) < eps * nu[j] - 1e-12) {
        std::ostringstream os;
        os << "P(" << i << ", " << j << ") = " << p(i, j) << " < eps*nu = "
           << eps * nu[j];
        throw Error(errc::minorization_violated, os.str());
      }
    }
  }

  ProbMeasure pi = unique_invariant_measure(p);
  DoeblinReport report;
  report.eps = eps;
  report.curve.reserve(static_cast<std::size_t>(n_max));
  Eigen::MatrixXd pn = p.matrix();
  double bound = 1.0;
  for (std::int64_t step = 1; step <= n_max; ++step) {
    bound *= 1.0 - eps;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double tv = 0.5 * (pn.row(i).transpose() - pi.weights()).cwiseAbs().sum();
      worst = std::max(worst, tv);
    }
    report.curve.push_back({step, worst, bound});
    if (worst > bound + 1e-9 && report.first_violation < 0) {
      report.bound_satisfied = false;
      report.first_violation = step;
    }
    if (step < n_max) pn = pn * p.matrix();
  }
  return report;
}

}  // namespace ergokit
