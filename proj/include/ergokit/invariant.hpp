#ifndef ERGOKIT_INVARIANT_HPP
#define ERGOKIT_INVARIANT_HPP

#include <optional>
#include <vector>

#include "ergokit/structure.hpp"

namespace ergokit {

// The unique pi with pi P = pi and pi(C) = 1, returned on the full state
// space (exact zeros off C). C must be a closed communicating class
// (not_closed_class otherwise). Solved by rank-revealing left-null-space
// extraction from (P|C - I); a null space of dimension != 1 is
// rank_deficiency. Residual || pi P - pi ||_1 <= 1e-10 guaranteed.
ProbMeasure stationary_on_class(const StochasticKernel& p, const StateSet& cls,
                                const Tolerances& tol = {});

// One stationary measure per closed class, in class order. These are exactly
// the extreme points of the invariant set; their supports are disjoint.
std::vector<ProbMeasure> ergodic_measures(const StochasticKernel& p,
                                          const Tolerances& tol = {});

// || mu P - mu ||_1 <= tol.
bool is_invariant(const StochasticKernel& p, const ProbMeasure& mu,
                  double tol = Tolerances{}.invariance);

// Representation of an invariant measure as a convex combination of the
// per-class stationary measures, weights w_i = mu(C_i). Components with
// weight < 1e-12 are omitted.
struct ErgodicDecomposition {
  struct Component {
    double weight;
    ProbMeasure measure;
    StateSet cls;
  };
  std::vector<Component> components;
  double residual_error;  // || sum_i w_i pi_i - mu ||_1
};

ErgodicDecomposition ergodic_decomposition(const StochasticKernel& p,
                                           const ProbMeasure& mu,
                                           const Tolerances& tol = {});

// Witness that two invariant measures are mutually singular: the density
// f = d mu1 / d eta with eta = (mu1 + mu2)/2 takes only the values 0 and 2,
// is a fixed point of P on supp(eta), and the separator A = { f >= 1 }
// carries all of mu1 and none of mu2.
struct SingularityCertificate {
  ProbMeasure mu1;
  ProbMeasure mu2;
  StateSet separator;
  StateFunction density;
};

// Builds the certificate for two DISTINCT ERGODIC invariant measures.
// Errors: not_invariant, equal_measures, not_ergodic;
// density_level_violation if the computed density is not two-valued (cannot
// happen for genuinely ergodic inputs; signals inconsistent data).
SingularityCertificate mutual_singularity_certificate(
    const StochasticKernel& p, const ProbMeasure& mu1, const ProbMeasure& mu2,
    const Tolerances& tol = {});

// From any two distinct invariant measures, produces a mutually singular
// pair: directly when both are ergodic, otherwise by conditioning the
// non-ergodic one on a closed class carrying partial mass.
SingularityCertificate singular_pair(const StochasticKernel& p,
                                     const ProbMeasure& mu,
                                     const ProbMeasure& nu,
                                     const Tolerances& tol = {});

// True iff every mu-a.s. invariant set has mu-mass 0 or 1 (within
// tolerance). Candidates are unions of closed classes intersected with
// supp(mu); a union carries interior mass iff at least two classes are
// charged, so charged classes are counted directly.
bool ergodicity_check(const StochasticKernel& p, const ProbMeasure& mu,
                      const Tolerances& tol = {});

// Full account of the invariant-measure set of a kernel.
//
// Unique verdict: the single invariant measure plus its ergodicity check
// (always true — uniqueness forces ergodicity).
// Multiple verdict: two distinct ergodic measures, their singularity
// certificate, and the disjoint absorbing pair (B1, B2) derived from the
// separator with mu1(B1) = 1, mu2(B2) = 1.
struct MultiplicityWitness {
  SingularityCertificate singularity;
  StateSet b1;
  StateSet b2;
};

struct UniquenessCertificate {
  enum class Verdict { kUnique, kMultiple };
  Verdict verdict;
  std::optional<ProbMeasure> unique_measure;   // on kUnique
  std::optional<bool> ergodic;                 // on kUnique
  std::optional<MultiplicityWitness> witness;  // on kMultiple
};

UniquenessCertificate uniqueness_certificate(const StochasticKernel& p,
                                             const Tolerances& tol = {});

// Re-checks a (round-tripped) certificate against the kernel; throws
// certificate_invariant on any failed clause.
void verify_uniqueness_certificate(const StochasticKernel& p,
                                   const UniquenessCertificate& cert,
                                   const Tolerances& tol = {});

}  // namespace ergokit

#endif  // ERGOKIT_INVARIANT_HPP
