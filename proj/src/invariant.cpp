#include "ergokit/invariant.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace ergokit {

namespace {

double invariance_residual(const StochasticKernel& p, const ProbMeasure& mu) {
  Eigen::VectorXd diff = p.matrix().transpose() * mu.weights() - mu.weights();
  return diff.cwiseAbs().sum();
}

bool class_matches_decomposition(const ClassDecomposition& dec,
                                 const StateSet& cls, bool* closed_out) {
  for (std::size_t k = 0; k < dec.classes.size(); ++k) {
    if (dec.classes[k] == cls) {
      *closed_out = dec.closed[k];
      return true;
    }
  }
  return false;
}

}  // namespace

ProbMeasure stationary_on_class(const StochasticKernel& p, const StateSet& cls,
                                const Tolerances& tol) {
  const int n = p.size();
  if (cls.universe_size() != n)
    throw Error(errc::dimension_mismatch, "class universe vs kernel size");
  ClassDecomposition dec = class_decomposition(p);
  bool closed = false;
  if (!class_matches_decomposition(dec, cls, &closed) || !closed)
    throw Error(errc::not_closed_class,
                "set is not a closed communicating class");

  std::vector<int> members = cls.indices();
  const int k = static_cast<int>(members.size());
  Eigen::MatrixXd sub(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) sub(r, c) = p(members[r], members[c]);

  // Left null space of (P|C - I), extracted rank-revealingly: the singular
  // vector of (P|C - I)^T for its smallest singular value. Robust for
  // periodic classes, where power iteration would not settle.
  Eigen::MatrixXd shifted =
      (sub - Eigen::MatrixXd::Identity(k, k)).transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  // Singular values are sorted descending; [k-1] is the null direction.
  if (k >= 2 && sv[k - 2] <= tol.rank) {
    std::ostringstream os;
    os << "null space of shifted class matrix has dimension > 1 (sigma_"
       << (k - 2) << " = " << sv[k - 2] << ")";
    throw Error(errc::rank_deficiency, os.str());
  }
  Eigen::VectorXd v = svd.matrixV().col(k - 1);
  if (v.sum() < 0.0) v = -v;
  // The null direction of a closed communicating class is strictly positive;
  // anything beyond round-off negativity means the input was not one.
  if (v.minCoeff() < -1e-8)
    throw Error(errc::rank_deficiency,
                "null vector is not sign-consistent; class not communicating");
  v = v.cwiseMax(0.0);
  v /= v.sum();

  Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < k; ++r) full[members[r]] = v[r];
  ProbMeasure pi = ProbMeasure::from_computation(std::move(full));

  double residual = invariance_residual(p, pi);
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "stationary solve residual " << residual;
    throw Error(errc::rank_deficiency, os.str());
  }
  return pi;
}

std::vector<ProbMeasure> ergodic_measures(const StochasticKernel& p,
                                          const Tolerances& tol) {
  ClassDecomposition dec = class_decomposition(p);
  std::vector<ProbMeasure> out;
  for (int k : dec.closed_class_indices())
    out.push_back(stationary_on_class(p, dec.classes[k], tol));
  return out;
}

bool is_invariant(const StochasticKernel& p, const ProbMeasure& mu,
                  double tol) {
  if (mu.size() != p.size())
    throw Error(errc::dimension_mismatch, "measure size vs kernel size");
  return invariance_residual(p, mu) <= tol;
}

ErgodicDecomposition ergodic_decomposition(const StochasticKernel& p,
                                           const ProbMeasure& mu,
                                           const Tolerances& tol) {
  if (!is_invariant(p, mu, tol.invariance)) {
    std::ostringstream os;
    os << "residual " << invariance_residual(p, mu) << " above "
       << tol.invariance;
    throw Error(errc::not_invariant, os.str());
  }
  ClassDecomposition dec = class_decomposition(p);
  double transient_mass = mu.mass(dec.transient_states);
  if (transient_mass > tol.separator) {
    std::ostringstream os;
    os << "mass " << transient_mass << " on transient states";
    throw Error(errc::mass_on_transient, os.str());
  }

  ErgodicDecomposition out;
  Eigen::VectorXd recombined = Eigen::VectorXd::Zero(p.size());
  for (int k : dec.closed_class_indices()) {
    double weight = mu.mass(dec.classes[k]);
    if (weight < 1e-12) continue;  // uncharged component, omitted
    ProbMeasure pi = stationary_on_class(p, dec.classes[k], tol);
    recombined += weight * pi.weights();
    out.components.push_back({weight, std::move(pi), dec.classes[k]});
  }
  out.residual_error = (recombined - mu.weights()).cwiseAbs().sum();
  return out;
}

SingularityCertificate mutual_singularity_certificate(
    const StochasticKernel& p, const ProbMeasure& mu1, const ProbMeasure& mu2,
    const Tolerances& tol) {
  const int n = p.size();
  if (mu1.size() != n || mu2.size() != n)
    throw Error(errc::dimension_mismatch, "measure size vs kernel size");
  for (const ProbMeasure* m : {&mu1, &mu2})
    if (!is_invariant(p, *m, tol.invariance))
      throw Error(errc::not_invariant, "input measure is not invariant");
  double gap = (mu1.weights() - mu2.weights()).cwiseAbs().sum();
  if (gap <= tol.invariance)
    throw Error(errc::equal_measures, "measures coincide within tolerance");
  for (const ProbMeasure* m : {&mu1, &mu2})
    if (!ergodicity_check(p, *m, tol))
      throw Error(errc::not_ergodic, "input measure is not ergodic");

  // Density of mu1 against the average eta = (mu1 + mu2)/2. For distinct
  // ergodic measures it is two-valued a.e.: 2 where mu1 lives, 0 where mu2
  // does. Off supp(eta) the convention is 0.
  Eigen::VectorXd eta = 0.5 * (mu1.weights() + mu2.weights());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  StateSet supp_eta(n);
  for (int i = 0; i < n; ++i) {
    if (eta[i] > tol.support) {
      supp_eta.insert(i);
      f[i] = mu1[i] / eta[i];
    }
  }

  // Fixed-point and two-level checks on supp(eta).
  Eigen::VectorXd pf = p.matrix() * f;
  for (int i : supp_eta.indices()) {
    if (std::abs(pf[i] - f[i]) > tol.density) {
      std::ostringstream os;
      os << "density fixed-point defect " << std::abs(pf[i] - f[i])
         << " at state " << i;
      throw Error(errc::density_level_violation, os.str());
    }
    if (std::min(std::abs(f[i]), std::abs(f[i] - 2.0)) > tol.density) {
      std::ostringstream os;
      os << "density value " << f[i] << " at state " << i
         << " is neither 0 nor 2";
      throw Error(errc::density_level_violation, os.str());
    }
  }

  StateSet separator(n);
  for (int i : supp_eta.indices())
    if (f[i] >= 1.0) separator.insert(i);

  if (std::abs(mu1.mass(separator) - 1.0) > tol.separator ||
      mu2.mass(separator) > tol.separator)
    throw Error(errc::density_level_violation,
                "separator does not split the pair");

  return SingularityCertificate{mu1, mu2, separator, StateFunction::of(f)};
}

SingularityCertificate singular_pair(const StochasticKernel& p,
                                     const ProbMeasure& mu,
                                     const ProbMeasure& nu,
                                     const Tolerances& tol) {
  const int n = p.size();
  if (mu.size() != n || nu.size() != n)
    throw Error(errc::dimension_mismatch, "measure size vs kernel size");
  for (const ProbMeasure* m : {&mu, &nu})
    if (!is_invariant(p, *m, tol.invariance))
      throw Error(errc::not_invariant, "input measure is not invariant");
  double gap = (mu.weights() - nu.weights()).cwiseAbs().sum();
  if (gap <= tol.invariance)
    throw Error(errc::equal_measures, "measures coincide within tolerance");

  bool mu_ergodic = ergodicity_check(p, mu, tol);
  bool nu_ergodic = ergodicity_check(p, nu, tol);
  if (mu_ergodic && nu_ergodic)
    return mutual_singularity_certificate(p, mu, nu, tol);

  // A non-ergodic invariant measure splits across closed classes: condition
  // it on a class carrying partial mass and on the complement. The two
  // conditionals are invariant, distinct, and concentrated on disjoint sets.
  const ProbMeasure& split = mu_ergodic ? nu : mu;
  ErgodicDecomposition dec = ergodic_decomposition(p, split, tol);
  // Non-ergodic invariant measures charge at least two classes.
  const StateSet& a = dec.components.front().cls;
  double wa = split.mass(a);

  Eigen::VectorXd cond_a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd cond_ac = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (a.contains(i))
      cond_a[i] = split[i] / wa;
    else
      cond_ac[i] = split[i] / (1.0 - wa);
  }
  ProbMeasure mu_a = ProbMeasure::from_computation(std::move(cond_a));
  ProbMeasure mu_ac = ProbMeasure::from_computation(std::move(cond_ac));

  // Density of mu_a against the pair average; supports are disjoint, so it
  // is exactly two-valued and the separator is supp(mu_a).
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  StateSet separator(n);
  for (int i = 0; i < n; ++i) {
    double eta = 0.5 * (mu_a[i] + mu_ac[i]);
    if (eta > tol.support) {
      f[i] = mu_a[i] / eta;
      if (f[i] >= 1.0) separator.insert(i);
    }
  }
  SingularityCertificate cert{std::move(mu_a), std::move(mu_ac), separator,
                              StateFunction::of(f)};
  if (std::abs(cert.mu1.mass(separator) - 1.0) > tol.separator ||
      cert.mu2.mass(separator) > tol.separator)
    throw Error(errc::certificate_invariant,
                "conditional split separator failed its mass contract");
  return cert;
}

bool ergodicity_check(const StochasticKernel& p, const ProbMeasure& mu,
                      const Tolerances& tol) {
  if (!is_invariant(p, mu, tol.invariance))
    throw Error(errc::not_invariant, "measure is not invariant");
  ClassDecomposition dec = class_decomposition(p);
  // Candidate invariant sets are unions of closed classes (cut to supp mu);
  // such a union has interior mass iff >= 2 individual classes are charged.
  int charged = 0;
  double charged_mass = 0.0;
  for (int k : dec.closed_class_indices()) {
    double m = mu.mass(dec.classes[k].intersect(mu.support(tol.support)));
    if (m > tol.separator) {
      ++charged;
      charged_mass = m;
    }
  }
  return charged == 1 && charged_mass >= 1.0 - tol.separator;
}

UniquenessCertificate uniqueness_certificate(const StochasticKernel& p,
                                             const Tolerances& tol) {
  ClassDecomposition dec = class_decomposition(p);
  std::vector<int> closed = dec.closed_class_indices();
  UniquenessCertificate cert;

  if (closed.size() == 1) {
    cert.verdict = UniquenessCertificate::Verdict::kUnique;
    cert.unique_measure = stationary_on_class(p, dec.classes[closed[0]], tol);
    cert.ergodic = ergodicity_check(p, *cert.unique_measure, tol);
    if (!*cert.ergodic)
      throw Error(errc::certificate_invariant,
                  "unique invariant measure failed its ergodicity check");
    return cert;
  }

  cert.verdict = UniquenessCertificate::Verdict::kMultiple;
  ProbMeasure mu1 = stationary_on_class(p, dec.classes[closed[0]], tol);
  ProbMeasure mu2 = stationary_on_class(p, dec.classes[closed[1]], tol);
  SingularityCertificate sing =
      mutual_singularity_certificate(p, mu1, mu2, tol);
  auto [b1, b2] = absorbing_witness_pair(p, sing.separator);

  if (b1.empty() || b2.empty())
    throw Error(errc::certificate_invariant, "absorbing witness set empty");
  if (!b1.disjoint_with(b2))
    throw Error(errc::certificate_invariant, "absorbing witnesses intersect");
  if (!is_absorbing(p, b1, tol.absorb) || !is_absorbing(p, b2, tol.absorb))
    throw Error(errc::certificate_invariant, "witness set not absorbing");
  if (std::abs(mu1.mass(b1) - 1.0) > tol.separator ||
      std::abs(mu2.mass(b2) - 1.0) > tol.separator)
    throw Error(errc::certificate_invariant,
                "witness sets do not carry their measures");

  cert.witness = MultiplicityWitness{std::move(sing), std::move(b1),
                                     std::move(b2)};
  return cert;
}

void verify_uniqueness_certificate(const StochasticKernel& p,
                                   const UniquenessCertificate& cert,
                                   const Tolerances& tol) {
  using Verdict = UniquenessCertificate::Verdict;
  auto fail = [](const std::string& what) {
    throw Error(errc::certificate_invariant, what);
  };

  if (cert.verdict == Verdict::kUnique) {
    if (!cert.unique_measure || !cert.ergodic || cert.witness)
      fail("unique verdict with wrong field population");
    if (!is_invariant(p, *cert.unique_measure, tol.invariance))
      fail("claimed measure is not invariant");
    if (!*cert.ergodic || !ergodicity_check(p, *cert.unique_measure, tol))
      fail("claimed measure fails ergodicity");
    if (class_decomposition(p).closed_class_count() != 1)
      fail("unique verdict but closed-class count differs from 1");
    return;
  }

  if (!cert.witness || cert.unique_measure || cert.ergodic)
    fail("multiple verdict with wrong field population");
  const MultiplicityWitness& w = *cert.witness;
  const SingularityCertificate& s = w.singularity;
  if (!is_invariant(p, s.mu1, tol.invariance) ||
      !is_invariant(p, s.mu2, tol.invariance))
    fail("witness measures are not invariant");
  if ((s.mu1.weights() - s.mu2.weights()).cwiseAbs().sum() <= tol.invariance)
    fail("witness measures coincide");
  if (std::abs(s.mu1.mass(s.separator) - 1.0) > tol.separator ||
      s.mu2.mass(s.separator) > tol.separator)
    fail("separator mass contract broken");

  // Density clauses: two-valued and a fixed point of P on supp(eta).
  const int n = p.size();
  if (s.density.size() != n) fail("density dimension mismatch");
  Eigen::VectorXd pf = p.matrix() * s.density.values();
  for (int i = 0; i < n; ++i) {
    double eta = 0.5 * (s.mu1[i] + s.mu2[i]);
    if (eta <= tol.support) continue;
    double fi = s.density[i];
    if (std::min(std::abs(fi), std::abs(fi - 2.0)) > tol.density)
      fail("density is not two-valued on supp(eta)");
    if (std::abs(pf[i] - fi) > tol.density)
      fail("density is not a fixed point on supp(eta)");
    if ((fi >= 1.0) != s.separator.contains(i))
      fail("separator does not match the density level set");
  }

  if (w.b1.empty() || w.b2.empty()) fail("absorbing witness set empty");
  if (!w.b1.disjoint_with(w.b2)) fail("absorbing witnesses intersect");
  if (!is_absorbing(p, w.b1, tol.absorb) || !is_absorbing(p, w.b2, tol.absorb))
    fail("witness set not absorbing");
  if (std::abs(s.mu1.mass(w.b1) - 1.0) > tol.separator ||
      std::abs(s.mu2.mass(w.b2) - 1.0) > tol.separator)
    fail("witness sets do not carry their measures");
}

}  // namespace ergokit
