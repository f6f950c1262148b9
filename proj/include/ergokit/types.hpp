#ifndef ERGOKIT_TYPES_HPP
#define ERGOKIT_TYPES_HPP

#include <Eigen/Dense>
#include <initializer_list>
#include <optional>
#include <vector>

#include "ergokit/errors.hpp"

namespace ergokit {

// Tolerance ladder. Construction is strict; post-arithmetic checks get one
// order of slack; statements about measures/densities sit higher up because
// they accumulate solver error.
inline constexpr double kRowSumTolConstruct = 1e-12;
inline constexpr double kRowSumTolArithmetic = 1e-10;
inline constexpr double kMeasureSumTol = 1e-12;
inline constexpr double kMeasureRenormBudget = 1e-10;

// Operational tolerances. Defaults are the contract; the CLI accepts
// overrides for experimentation but never silently changes them.
struct Tolerances {
  double absorb = 1e-12;     // row mass kept inside an absorbing set
  double invariance = 1e-9;  // L1 residual for mu*P = mu
  double density = 1e-8;     // density fixed-point and two-level checks
  double separator = 1e-10;  // mass of separating sets at {0,1}
  double support = 1e-12;    // entries above this count as charged
  double rank = 1e-8;        // singular-value threshold for rank decisions
};

// Subset of {0, ..., n-1}, value-semantic bitmask.
class StateSet {
 public:
  StateSet() : bits_() {}
  explicit StateSet(int universe) : bits_(check_universe(universe), false) {}

  static StateSet full(int universe) {
    StateSet s(universe);
    s.bits_.assign(s.bits_.size(), true);
    return s;
  }
  static StateSet of(int universe, std::initializer_list<int> states) {
    StateSet s(universe);
    for (int i : states) s.insert(i);
    return s;
  }
  static StateSet from_indices(int universe, const std::vector<int>& states) {
    StateSet s(universe);
    for (int i : states) s.insert(i);
    return s;
  }

  int universe_size() const { return static_cast<int>(bits_.size()); }
  int count() const;
  bool empty() const { return count() == 0; }
  bool contains(int i) const { return bits_[check_index(i)]; }

  void insert(int i) { bits_[check_index(i)] = true; }
  void erase(int i) { bits_[check_index(i)] = false; }

  StateSet complement() const;
  StateSet intersect(const StateSet& other) const;
  StateSet unite(const StateSet& other) const;
  bool disjoint_with(const StateSet& other) const;
  bool is_subset_of(const StateSet& other) const;
  std::vector<int> indices() const;  // ascending
  int min_state() const;             // -1 when empty

  bool operator==(const StateSet&) const = default;

 private:
  int check_universe(int universe) const {
    if (universe < 0)
      throw Error(errc::out_of_range, "state-set universe must be >= 0");
    return universe;
  }
  int check_index(int i) const {
    if (i < 0 || i >= universe_size())
      throw Error(errc::invalid_state,
                  "state " + std::to_string(i) + " outside universe of size " +
                      std::to_string(universe_size()));
    return i;
  }
  std::vector<bool> bits_;
};

// Probability vector over states: entrywise >= 0, sums to 1.
class ProbMeasure {
 public:
  // Strict construction for user-supplied data.
  static ProbMeasure validated(Eigen::VectorXd weights);

  // For arithmetic results: clamps negative round-off to 0 and renormalizes
  // when the total deviation stays within budget; larger deviation is an
  // error, never silently repaired.
  static ProbMeasure from_computation(Eigen::VectorXd weights);

  static ProbMeasure point_mass(int state, int n);
  static ProbMeasure uniform(int n);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const Eigen::VectorXd& weights() const { return w_; }

  double mass(const StateSet& set) const;
  StateSet support(double tol = 1e-12) const;

 private:
  explicit ProbMeasure(Eigen::VectorXd w) : w_(std::move(w)) {}
  Eigen::VectorXd w_;
};

// Real-valued observable on states, optionally with a declared sup bound.
class StateFunction {
 public:
  static StateFunction of(Eigen::VectorXd values);
  static StateFunction bounded(Eigen::VectorXd values, double bound);

  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }
  const Eigen::VectorXd& values() const { return v_; }
  std::optional<double> bound() const { return bound_; }
  double sup_norm() const { return v_.size() ? v_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  StateFunction(Eigen::VectorXd v, std::optional<double> b)
      : v_(std::move(v)), bound_(b) {}
  Eigen::VectorXd v_;
  std::optional<double> bound_;
};

}  // namespace ergokit

#endif  // ERGOKIT_TYPES_HPP
