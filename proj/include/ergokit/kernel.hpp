#ifndef ERGOKIT_KERNEL_HPP
#define ERGOKIT_KERNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ergokit/types.hpp"

namespace ergokit {

// Row-stochastic matrix over a finite state space. Immutable after
// construction; every instance in the program satisfies the row contract.
class StochasticKernel {
 public:
  // Strict entry: entries >= 0, each row sums to 1 within 1e-12.
  // Throws negative_entry(i,j) / row_sum_violation(i, sum). Never
  // renormalizes silently.
  static StochasticKernel validate(Eigen::MatrixXd rows,
                                   std::vector<std::string> labels = {});

  // Entry point for results of kernel arithmetic (powers, resolvents):
  // same shape contract at the looser 1e-10 row-sum tolerance.
  static StochasticKernel from_arithmetic(Eigen::MatrixXd rows,
                                          std::vector<std::string> labels = {});

  static StochasticKernel identity(int n);

  int size() const { return static_cast<int>(p_.rows()); }
  double operator()(int i, int j) const { return p_(i, j); }
  const Eigen::MatrixXd& matrix() const { return p_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Row mass inside a set: sum_{j in set} P(i, j).
  double row_mass(int i, const StateSet& set) const;

 private:
  StochasticKernel(Eigen::MatrixXd p, std::vector<std::string> labels)
      : p_(std::move(p)), labels_(std::move(labels)) {}
  static StochasticKernel checked(Eigen::MatrixXd rows,
                                  std::vector<std::string> labels,
                                  double row_sum_tol);
  Eigen::MatrixXd p_;
  std::vector<std::string> labels_;
};

// (mu P)_j = sum_i mu_i P_ij. Result is clamped/renormalized within the
// round-off budget.
ProbMeasure apply_left(const ProbMeasure& mu, const StochasticKernel& p);

// (P f)_i = sum_j P_ij f_j. A declared bound on f carries over (contraction).
StateFunction apply_right(const StochasticKernel& p, const StateFunction& f);

// P^m by repeated squaring; P^0 = I.
StochasticKernel power(const StochasticKernel& p, std::uint64_t m);

// Averaged iterates from a point mass: (1/n) sum_{k=0}^{n-1} delta_x P^k,
// accumulated as row vectors (never as matrix powers). n >= 1.
ProbMeasure cesaro_average(const StochasticKernel& p, int x, std::int64_t n);

struct ResolventParams {
  double a = 0.5;  // averaging weight, must lie in (0,1)
  bool closed_form = true;
  int series_terms = 0;  // N >= 1 when closed_form == false

  void check() const;
};

// Resolvent kernel R_a = (1-a) sum_{k>=0} a^k P^k.
//
// Closed form solves (I - aP) X = (1-a) I; the support of the result is
// exactly the reachability closure of the support of P (unreachable entries
// are exact zeros, reachable entries are strictly positive). Series mode
// truncates at N terms and renormalizes by the truncated geometric mass so
// the result stays row-stochastic; the dropped tail has weight a^N.
StochasticKernel resolvent(const StochasticKernel& p,
                           const ResolventParams& params);

// Weight of the tail dropped by series truncation (a^N); 0 for closed form.
double resolvent_tail_bound(const ResolventParams& params);

// reachable[x] = set of y with a directed support path x -> y (x itself
// always included; path length 0).
std::vector<StateSet> reachability_closure(const StochasticKernel& p);

}  // namespace ergokit

#endif  // ERGOKIT_KERNEL_HPP
