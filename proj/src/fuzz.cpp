#include "ergokit/fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <vector>

#include "ergokit/invariant.hpp"
#include "ergokit/json_io.hpp"
#include "ergokit/structure.hpp"

namespace ergokit {

StochasticKernel random_kernel(Rng& rng, int n, double density) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (rng.uniform() < density) cols.push_back(j);
    if (cols.empty()) cols.push_back(rng.uniform_int(0, n - 1));
    double sum = 0.0;
    for (int j : cols) {
      rows(i, j) = rng.uniform(0.1, 1.0);
      sum += rows(i, j);
    }
    for (int j : cols) rows(i, j) /= sum;
    // Let the last entry absorb the normalization residue: the row then
    // sums to 1 up to one ulp, well inside the strict construction check.
    double rest = 0.0;
    for (std::size_t k = 0; k + 1 < cols.size(); ++k) rest += rows(i, cols[k]);
    rows(i, cols.back()) = 1.0 - rest;
  }
  return StochasticKernel::validate(std::move(rows));
}

namespace {

// --- exhaustive oracles (independent of the fixed-point/SCC code paths) ---

bool mask_absorbing(const StochasticKernel& p, std::uint32_t mask) {
  const int n = p.size();
  for (int i = 0; i < n; ++i) {
    if (!(mask & (1u << i))) continue;
    double inside = 0.0;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) inside += p(i, j);
    if (inside < 1.0 - 1e-12) return false;
  }
  return true;
}

std::vector<std::uint32_t> absorbing_masks(const StochasticKernel& p) {
  const int n = p.size();
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    if (mask_absorbing(p, mask)) out.push_back(mask);
  return out;
}

std::uint32_t set_to_mask(const StateSet& s) {
  std::uint32_t mask = 0;
  for (int i : s.indices()) mask |= 1u << i;
  return mask;
}

struct PropertyFailure {
  std::string property;
  std::string detail;
};

// One fuzz case: derive a kernel, run every cross-check, report the first
// failure (if any).
std::optional<PropertyFailure> run_case(const FuzzConfig& cfg, int index,
                                        std::string* kernel_json) {
  Rng rng(cfg.seed, static_cast<std::uint64_t>(index) + 1);
  int n = rng.uniform_int(2, cfg.max_states);
  double density = rng.uniform(cfg.density_lo, cfg.density_hi);
  StochasticKernel p = random_kernel(rng, n, density);
  *kernel_json = kernel_to_json(p).dump();

  IndecomposabilityCertificate cert = indecomposability_certificate(p);
  bool decomposable =
      cert.verdict == IndecomposabilityCertificate::Verdict::kDecomposable;

  // Exhaustive subset enumeration stays affordable up to 12 states.
  if (n <= 12) {
    std::vector<std::uint32_t> absorbing = absorbing_masks(p);

    // Decomposability verdict vs exhaustive disjoint-pair search.
    bool oracle_decomposable = false;
    for (std::size_t a = 0; a < absorbing.size() && !oracle_decomposable; ++a)
      for (std::size_t b = a + 1; b < absorbing.size(); ++b)
        if ((absorbing[a] & absorbing[b]) == 0) {
          oracle_decomposable = true;
          break;
        }
    if (decomposable != oracle_decomposable)
      return PropertyFailure{"decomposability-vs-enumeration",
                             decomposable
                                 ? "certificate says decomposable, "
                                   "enumeration finds no disjoint pair"
                                 : "enumeration finds a disjoint pair, "
                                   "certificate says indecomposable"};

    // Greatest-fixed-point absorbing hull vs union of enumerated subsets,
    // for a handful of random seed sets.
    for (int trial = 0; trial < 4; ++trial) {
      StateSet a(n);
      for (int i = 0; i < n; ++i)
        if (rng.uniform() < 0.5) a.insert(i);
      std::uint32_t amask = set_to_mask(a);
      std::uint32_t oracle_union = 0;
      for (std::uint32_t m : absorbing)
        if ((m & ~amask) == 0) oracle_union |= m;
      StateSet hull = largest_absorbing_subset(p, a);
      if (set_to_mask(hull) != oracle_union) {
        std::ostringstream os;
        os << "seed-set mask " << amask << ": fixed point "
           << set_to_mask(hull) << " vs enumerated union " << oracle_union;
        return PropertyFailure{"absorbing-hull-vs-enumeration", os.str()};
      }
      if (!hull.empty() && !is_absorbing(p, hull))
        return PropertyFailure{"absorbing-hull-not-absorbing", "nonempty hull"};
    }
  }

  // Uniqueness certificate: verdict consistent with the class structure and
  // internally verified (the builder throws on any broken clause).
  UniquenessCertificate uniq = uniqueness_certificate(p);
  bool unique =
      uniq.verdict == UniquenessCertificate::Verdict::kUnique;
  if (unique == decomposable)
    return PropertyFailure{"verdict-mismatch",
                           "uniqueness and decomposability disagree"};
  verify_uniqueness_certificate(p, uniq);

  // Resolvent transfer: same class structure, invariant measures carry over.
  StochasticKernel r = resolvent(p, ResolventParams{0.5, true, 0});
  ClassDecomposition dp = class_decomposition(p);
  ClassDecomposition dr = class_decomposition(r);
  std::vector<int> cp = dp.closed_class_indices();
  std::vector<int> cr = dr.closed_class_indices();
  if (cp.size() != cr.size())
    return PropertyFailure{"resolvent-class-transfer",
                           "closed-class counts differ"};
  for (std::size_t k = 0; k < cp.size(); ++k)
    if (!(dp.classes[cp[k]] == dr.classes[cr[k]]))
      return PropertyFailure{"resolvent-class-transfer",
                             "closed classes differ"};
  for (const ProbMeasure& mu : ergodic_measures(p))
    if (!is_invariant(r, mu, 1e-9))
      return PropertyFailure{"resolvent-invariance-transfer",
                             "ergodic measure of P not invariant under R"};

  return std::nullopt;
}

}  // namespace

int fuzz_thread_count(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int cap = hw;
  if (const char* env = std::getenv("ERGOKIT_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed >= 1) cap = std::min(cap, parsed);
  }
  if (requested >= 1) return std::min(requested, cap);
  return cap;
}

FuzzReport run_fuzz(const FuzzConfig& config) {
  if (config.count < 0 || config.max_states < 2 || config.max_states > 20)
    throw Error(errc::out_of_range, "fuzz config out of range");
  const int count = config.count;
  const int threads = fuzz_thread_count(config.threads);

  std::vector<std::optional<FuzzViolation>> slots(count);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int index = next.fetch_add(1);
      if (index >= count) return;
      std::string kernel_json;
      std::optional<PropertyFailure> failure;
      try {
        failure = run_case(config, index, &kernel_json);
      } catch (const Error& e) {
        failure = PropertyFailure{"exception", e.what()};
      }
      if (failure)
        slots[index] = FuzzViolation{index, failure->property, failure->detail,
                                     kernel_json};
    }
  };

  if (threads <= 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, count); ++t)
      pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  FuzzReport report;
  report.count = count;
  for (auto& slot : slots)  // index order: identical for any thread count
    if (slot) report.violations.push_back(std::move(*slot));
  return report;
}

}  // namespace ergokit
