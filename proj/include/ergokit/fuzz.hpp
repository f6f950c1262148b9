#ifndef ERGOKIT_FUZZ_HPP
#define ERGOKIT_FUZZ_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ergokit/kernel.hpp"
#include "ergokit/rng.hpp"

namespace ergokit {

// Random sparse kernel: each entry present with probability `density`
// (every row forced nonempty), values uniform in [0.1, 1) before row
// normalization; the last entry of each row absorbs the normalization
// residue so row sums are exact to an ulp.
StochasticKernel random_kernel(Rng& rng, int n, double density);

struct FuzzConfig {
  std::uint64_t seed = 0;
  int count = 100;
  int max_states = 12;       // n drawn uniform in [2, max_states]
  double density_lo = 0.15;
  double density_hi = 0.9;
  int threads = 0;           // 0 = min(hardware, ERGOKIT_THREADS cap)
};

struct FuzzViolation {
  int index;
  std::string property;
  std::string detail;
  std::string kernel_json;  // offending kernel, serialized
};

struct FuzzReport {
  int count = 0;
  std::vector<FuzzViolation> violations;  // ascending by index
};

// Randomized self-check: per index derives a kernel from (seed, index) and
// verifies structural certificates against exhaustive subset enumeration,
// certificate internal consistency, and resolvent structure transfer.
// Parallelizes across indices (per-index derived streams, results merged in
// index order, so the report is identical for any thread count).
FuzzReport run_fuzz(const FuzzConfig& config);

// Thread cap from the environment (ERGOKIT_THREADS), hardware concurrency
// otherwise; always >= 1.
int fuzz_thread_count(int requested);

}  // namespace ergokit

#endif  // ERGOKIT_FUZZ_HPP
