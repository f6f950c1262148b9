#include "ergokit/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ergokit {

const char* errc_name(errc c) {
  switch (c) {
    case errc::negative_entry: return "NegativeEntry";
    case errc::row_sum_violation: return "RowSumViolation";
    case errc::measure_deviation: return "MeasureDeviation";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::invalid_state: return "InvalidState";
    case errc::out_of_range: return "OutOfRange";
    case errc::singular_solve: return "SingularSolve";
    case errc::not_closed_class: return "NotClosedClass";
    case errc::rank_deficiency: return "RankDeficiency";
    case errc::not_invariant: return "NotInvariant";
    case errc::mass_on_transient: return "MassOnTransient";
    case errc::not_ergodic: return "NotErgodic";
    case errc::equal_measures: return "EqualMeasures";
    case errc::density_level_violation: return "DensityLevelViolation";
    case errc::not_unique: return "NotUnique";
    case errc::minorization_violated: return "MinorizationViolated";
    case errc::invalid_spec: return "InvalidSpec";
    case errc::parse_error: return "ParseError";
    case errc::certificate_invariant: return "CertificateInvariant";
  }
  return "UnknownError";
}

// ---------------------------------------------------------------------------
// StateSet
// ---------------------------------------------------------------------------

int StateSet::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), true));
}

StateSet StateSet::complement() const {
  StateSet out(*this);
  out.bits_.flip();
  return out;
}

StateSet StateSet::intersect(const StateSet& other) const {
  if (other.universe_size() != universe_size())
    throw Error(errc::dimension_mismatch, "state sets over different universes");
  StateSet out(*this);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    out.bits_[i] = bits_[i] && other.bits_[i];
  return out;
}

StateSet StateSet::unite(const StateSet& other) const {
  if (other.universe_size() != universe_size())
    throw Error(errc::dimension_mismatch, "state sets over different universes");
  StateSet out(*this);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    out.bits_[i] = bits_[i] || other.bits_[i];
  return out;
}

bool StateSet::disjoint_with(const StateSet& other) const {
  if (other.universe_size() != universe_size())
    throw Error(errc::dimension_mismatch, "state sets over different universes");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && other.bits_[i]) return false;
  return true;
}

bool StateSet::is_subset_of(const StateSet& other) const {
  if (other.universe_size() != universe_size())
    throw Error(errc::dimension_mismatch, "state sets over different universes");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

std::vector<int> StateSet::indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<int>(i));
  return out;
}

int StateSet::min_state() const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// ProbMeasure
// ---------------------------------------------------------------------------

ProbMeasure ProbMeasure::validated(Eigen::VectorXd weights) {
  if (weights.size() < 1)
    throw Error(errc::dimension_mismatch, "measure needs at least one state");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      std::ostringstream os;
      os << "weight " << weights[i] << " at state " << i;
      throw Error(errc::negative_entry, os.str());
    }
  }
  double sum = weights.sum();
  if (std::abs(sum - 1.0) > kMeasureSumTol) {
    std::ostringstream os;
    os << "measure sums to " << sum;
    throw Error(errc::measure_deviation, os.str());
  }
  return ProbMeasure(std::move(weights));
}

ProbMeasure ProbMeasure::from_computation(Eigen::VectorXd weights) {
  if (weights.size() < 1)
    throw Error(errc::dimension_mismatch, "measure needs at least one state");
  double deviation = 0.0;  // clamped negative mass plus sum drift
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]))
      throw Error(errc::measure_deviation, "non-finite weight");
    if (weights[i] < 0.0) {
      deviation += -weights[i];
      weights[i] = 0.0;
    }
  }
  double sum = weights.sum();
  deviation += std::abs(sum - 1.0);
  if (deviation > kMeasureRenormBudget || sum <= 0.0) {
    std::ostringstream os;
    os << "round-off deviation " << deviation << " exceeds budget";
    throw Error(errc::measure_deviation, os.str());
  }
  if (sum != 1.0) weights /= sum;
  return ProbMeasure(std::move(weights));
}

ProbMeasure ProbMeasure::point_mass(int state, int n) {
  if (n < 1) throw Error(errc::dimension_mismatch, "empty state space");
  if (state < 0 || state >= n)
    throw Error(errc::invalid_state, "point mass at state " +
                                         std::to_string(state) + " of " +
                                         std::to_string(n));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[state] = 1.0;
  return ProbMeasure(std::move(w));
}

ProbMeasure ProbMeasure::uniform(int n) {
  if (n < 1) throw Error(errc::dimension_mismatch, "empty state space");
  return ProbMeasure(Eigen::VectorXd::Constant(n, 1.0 / n));
}

double ProbMeasure::mass(const StateSet& set) const {
  if (set.universe_size() != size())
    throw Error(errc::dimension_mismatch, "set universe vs measure size");
  double total = 0.0;
  for (int i = 0; i < size(); ++i)
    if (set.contains(i)) total += w_[i];
  return total;
}

StateSet ProbMeasure::support(double tol) const {
  StateSet s(size());
  for (int i = 0; i < size(); ++i)
    if (w_[i] > tol) s.insert(i);
  return s;
}

// ---------------------------------------------------------------------------
// StateFunction
// ---------------------------------------------------------------------------

StateFunction StateFunction::of(Eigen::VectorXd values) {
  if (values.size() < 1)
    throw Error(errc::dimension_mismatch, "observable needs at least one state");
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw Error(errc::out_of_range,
                  "non-finite observable value at state " + std::to_string(i));
  return StateFunction(std::move(values), std::nullopt);
}

StateFunction StateFunction::bounded(Eigen::VectorXd values, double bound) {
  StateFunction f = of(std::move(values));
  if (!(bound >= 0.0) || !std::isfinite(bound))
    throw Error(errc::out_of_range, "bound must be finite and nonnegative");
  // A few ulps of slack: averaging operators contract the sup norm
  // mathematically, but each application rounds.
  double slack = 16.0 * 1e-16 * std::max(1.0, bound);
  if (f.sup_norm() > bound + slack) {
    std::ostringstream os;
    os << "sup |f| = " << f.sup_norm() << " exceeds declared bound " << bound;
    throw Error(errc::out_of_range, os.str());
  }
  return StateFunction(f.v_, bound);
}

}  // namespace ergokit
