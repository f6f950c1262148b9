#ifndef ERGOKIT_STRUCTURE_HPP
#define ERGOKIT_STRUCTURE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "ergokit/kernel.hpp"
#include "ergokit/types.hpp"

namespace ergokit {

// Support digraph of a kernel: edge i -> j iff P(i,j) > 0 exactly.
// Structure queries always run on original kernels, whose zeros are exact;
// kernels produced by arithmetic keep exact structural zeros as well
// (products and sums of nonnegative floats cannot invent support).
struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // ascending neighbor lists
};

Digraph support_digraph(const StochasticKernel& p);

// Communicating classes (strongly connected components of the support
// digraph), canonically ordered by smallest member state. A class is closed
// when no support edge leaves it; transient states are those in non-closed
// classes.
struct ClassDecomposition {
  std::vector<StateSet> classes;
  std::vector<bool> closed;  // parallel to classes
  StateSet transient_states;

  std::vector<int> closed_class_indices() const;
  int closed_class_count() const;
};

ClassDecomposition class_decomposition(const StochasticKernel& p);

// True iff every state of the set keeps its full row mass inside the set:
// sum_{j in A} P(i,j) >= 1 - tol for all i in A. The empty set is vacuously
// absorbing; callers that need substance must check emptiness themselves.
bool is_absorbing(const StochasticKernel& p, const StateSet& a,
                  double tol = Tolerances{}.absorb);

// Greatest fixed point of S -> { x in S : P(x, S) = 1 } started at A: the
// largest absorbing subset of A (empty when none exists). Every absorbing
// subset of A is contained in the result. Terminates within n sweeps.
StateSet largest_absorbing_subset(const StochasticKernel& p, const StateSet& a,
                                  double tol = Tolerances{}.absorb);

// Verdict on whether two disjoint nonempty absorbing sets exist. The witness
// (present exactly on the decomposable verdict) is the pair of closed classes
// with the smallest minimal state indices — deterministic across runs.
struct IndecomposabilityCertificate {
  enum class Verdict { kIndecomposable, kDecomposable };
  Verdict verdict;
  std::optional<std::pair<StateSet, StateSet>> witness;
};

IndecomposabilityCertificate indecomposability_certificate(
    const StochasticKernel& p);

// From a separating set A, the canonical pair of disjoint absorbing sets:
// B1 = largest absorbing subset of A, B2 = largest absorbing subset of the
// complement. Mutually singular invariant measures concentrate on these.
std::pair<StateSet, StateSet> absorbing_witness_pair(const StochasticKernel& p,
                                                     const StateSet& separator);

// Re-checks an (externally produced or round-tripped) certificate against
// the kernel; throws certificate_invariant on any mismatch.
void verify_indecomposability_certificate(
    const StochasticKernel& p, const IndecomposabilityCertificate& cert);

}  // namespace ergokit

#endif  // ERGOKIT_STRUCTURE_HPP
