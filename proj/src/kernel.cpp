#include "ergokit/kernel.hpp"

#include <Eigen/LU>
#include <cmath>
#include <deque>
#include <sstream>

namespace ergokit {

StochasticKernel StochasticKernel::checked(Eigen::MatrixXd rows,
                                           std::vector<std::string> labels,
                                           double row_sum_tol) {
  const Eigen::Index n = rows.rows();
  if (n < 1 || rows.cols() != n)
    throw Error(errc::dimension_mismatch,
                "kernel must be square with at least one state");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n)
    throw Error(errc::dimension_mismatch, "label count vs state count");
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = rows(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << v;
        throw Error(errc::negative_entry, os.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > row_sum_tol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << sum;
      throw Error(errc::row_sum_violation, os.str());
    }
  }
  return StochasticKernel(std::move(rows), std::move(labels));
}

StochasticKernel StochasticKernel::validate(Eigen::MatrixXd rows,
                                            std::vector<std::string> labels) {
  return checked(std::move(rows), std::move(labels), kRowSumTolConstruct);
}

StochasticKernel StochasticKernel::from_arithmetic(
    Eigen::MatrixXd rows, std::vector<std::string> labels) {
  // Accept roundoff drift up to the arithmetic budget, then strip it so the
  // published row-sum invariant holds exactly for the result.
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double sum = rows.row(i).sum();
    if (!std::isfinite(sum) || std::abs(sum - 1.0) > kRowSumTolArithmetic) {
      std::ostringstream os;
      os << "row " << i << " sums to " << sum;
      throw Error(errc::row_sum_violation, os.str());
    }
    rows.row(i) /= sum;
  }
  return checked(std::move(rows), std::move(labels), kRowSumTolConstruct);
}

StochasticKernel StochasticKernel::identity(int n) {
  return validate(Eigen::MatrixXd::Identity(n, n));
}

double StochasticKernel::row_mass(int i, const StateSet& set) const {
  if (i < 0 || i >= size())
    throw Error(errc::invalid_state, "row " + std::to_string(i));
  if (set.universe_size() != size())
    throw Error(errc::dimension_mismatch, "set universe vs kernel size");
  double mass = 0.0;
  for (int j = 0; j < size(); ++j)
    if (set.contains(j)) mass += p_(i, j);
  return mass;
}

ProbMeasure apply_left(const ProbMeasure& mu, const StochasticKernel& p) {
  if (mu.size() != p.size())
    throw Error(errc::dimension_mismatch, "measure size vs kernel size");
  Eigen::VectorXd out = p.matrix().transpose() * mu.weights();
  return ProbMeasure::from_computation(std::move(out));
}

StateFunction apply_right(const StochasticKernel& p, const StateFunction& f) {
  if (f.size() != p.size())
    throw Error(errc::dimension_mismatch, "observable size vs kernel size");
  Eigen::VectorXd out = p.matrix() * f.values();
  if (f.bound()) return StateFunction::bounded(std::move(out), *f.bound());
  return StateFunction::of(std::move(out));
}

StochasticKernel power(const StochasticKernel& p, std::uint64_t m) {
  const int n = p.size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd base = p.matrix();
  while (m > 0) {
    if (m & 1) acc = acc * base;
    m >>= 1;
    if (m > 0) base = base * base;
  }
  return StochasticKernel::from_arithmetic(std::move(acc));
}

ProbMeasure cesaro_average(const StochasticKernel& p, int x, std::int64_t n) {
  if (x < 0 || x >= p.size())
    throw Error(errc::invalid_state, "start state " + std::to_string(x));
  if (n < 1) throw Error(errc::out_of_range, "need at least one term");
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(p.size());
  row[x] = 1.0;
  Eigen::RowVectorXd acc = row;
  for (std::int64_t k = 1; k < n; ++k) {
    row = row * p.matrix();  // delta_x P^k, advanced as a row vector
    acc += row;
  }
  return ProbMeasure::from_computation(acc.transpose() / static_cast<double>(n));
}

void ResolventParams::check() const {
  if (!(a > 0.0) || !(a < 1.0) || !std::isfinite(a)) {
    std::ostringstream os;
    os << "averaging weight a = " << a << " outside (0, 1)";
    throw Error(errc::out_of_range, os.str());
  }
  if (!closed_form && series_terms < 1)
    throw Error(errc::out_of_range, "series mode needs at least one term");
}

double resolvent_tail_bound(const ResolventParams& params) {
  params.check();
  if (params.closed_form) return 0.0;
  return std::pow(params.a, params.series_terms);
}

std::vector<StateSet> reachability_closure(const StochasticKernel& p) {
  const int n = p.size();
  std::vector<StateSet> reach;
  reach.reserve(n);
  for (int x = 0; x < n; ++x) {
    StateSet seen(n);
    seen.insert(x);
    std::deque<int> queue{x};
    while (!queue.empty()) {
      int i = queue.front();
      queue.pop_front();
      for (int j = 0; j < n; ++j) {
        if (p(i, j) > 0.0 && !seen.contains(j)) {
          seen.insert(j);
          queue.push_back(j);
        }
      }
    }
    reach.push_back(std::move(seen));
  }
  return reach;
}

namespace {

StochasticKernel resolvent_closed_form(const StochasticKernel& p, double a) {
  const int n = p.size();
  // I - aP is strictly row diagonally dominant for a < 1, so the LU solve
  // cannot encounter a singular pivot structure; any failure downstream is
  // reported, not repaired.
  Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(n, n) - a * p.matrix();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  Eigen::MatrixXd r = lu.solve((1.0 - a) * Eigen::MatrixXd::Identity(n, n));

  // The Neumann series makes entries at unreachable pairs exact zeros; the
  // solve leaves round-off there. Zero those positions (after checking they
  // are round-off sized) and insist the reachable ones came out positive.
  std::vector<StateSet> reach = reachability_closure(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (reach[i].contains(j)) {
        if (!(r(i, j) > 0.0)) {
          std::ostringstream os;
          os << "reachable entry (" << i << ", " << j << ") solved to "
             << r(i, j);
          throw Error(errc::singular_solve, os.str());
        }
      } else {
        if (std::abs(r(i, j)) > 1e-9) {
          std::ostringstream os;
          os << "unreachable entry (" << i << ", " << j << ") solved to "
             << r(i, j);
          throw Error(errc::singular_solve, os.str());
        }
        r(i, j) = 0.0;
      }
    }
  }
  return StochasticKernel::from_arithmetic(std::move(r), p.labels());
}

StochasticKernel resolvent_series(const StochasticKernel& p, double a, int terms) {
  const int n = p.size();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);  // a^k P^k
  Eigen::MatrixXd acc = term;
  double weight_sum = 1.0;
  double weight = 1.0;
  for (int k = 1; k < terms; ++k) {
    term = a * (term * p.matrix());
    acc += term;
    weight *= a;
    weight_sum += weight;
  }
  // Normalizing by the truncated geometric mass keeps the result a convex
  // combination of kernel powers (row-stochastic), off the untruncated
  // resolvent by the dropped-tail weight a^N.
  acc /= weight_sum;
  return StochasticKernel::from_arithmetic(std::move(acc), p.labels());
}

}  // namespace

StochasticKernel resolvent(const StochasticKernel& p,
                           const ResolventParams& params) {
  params.check();
  if (params.closed_form) return resolvent_closed_form(p, params.a);
  return resolvent_series(p, params.a, params.series_terms);
}

}  // namespace ergokit
