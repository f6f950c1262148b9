#include <doctest.h>

#include <Eigen/Dense>

#include "ergokit/fixtures.hpp"
#include "ergokit/fuzz.hpp"
#include "ergokit/rng.hpp"
#include "ergokit/structure.hpp"
#include "oracles.hpp"

using namespace ergokit;

namespace {

StochasticKernel make(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd m(n, n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return StochasticKernel::validate(std::move(m));
}

// diag(2-cycle, [[1]]) on 3 states.
StochasticKernel cycle_plus_sink() {
  return build_block_kernel(
      {make({{0, 1}, {1, 0}}), StochasticKernel::identity(1)});
}

}  // namespace

TEST_CASE("support_digraph reads off positive entries") {
  Digraph id3 = support_digraph(StochasticKernel::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id3.adj[i] == std::vector<int>{i});

  Digraph cyc = support_digraph(make({{0, 1}, {1, 0}}));
  CHECK(cyc.adj[0] == std::vector<int>{1});
  CHECK(cyc.adj[1] == std::vector<int>{0});

  Digraph drift = support_digraph(make({{0.5, 0.5}, {0, 1}}));
  CHECK(drift.adj[0] == std::vector<int>{0, 1});
  CHECK(drift.adj[1] == std::vector<int>{1});
}

TEST_CASE("class_decomposition identifies closed classes and transients") {
  ClassDecomposition id3 = class_decomposition(StochasticKernel::identity(3));
  CHECK(id3.classes.size() == 3);
  CHECK(id3.closed_class_count() == 3);
  CHECK(id3.transient_states.empty());

  ClassDecomposition drift = class_decomposition(make({{0.5, 0.5}, {0, 1}}));
  REQUIRE(drift.classes.size() == 2);
  CHECK(drift.classes[0] == StateSet::of(2, {0}));
  CHECK_FALSE(drift.closed[0]);
  CHECK(drift.classes[1] == StateSet::of(2, {1}));
  CHECK(drift.closed[1]);
  CHECK(drift.transient_states == StateSet::of(2, {0}));

  ClassDecomposition blocks = class_decomposition(cycle_plus_sink());
  REQUIRE(blocks.classes.size() == 2);
  CHECK(blocks.classes[0] == StateSet::of(3, {0, 1}));
  CHECK(blocks.classes[1] == StateSet::of(3, {2}));
  CHECK(blocks.closed_class_count() == 2);
}

TEST_CASE("class_decomposition agrees with naive pairwise-reachability SCC") {
  Rng rng(421, 0);
  for (int trial = 0; trial < 60; ++trial) {
    int n = rng.uniform_int(2, 11);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.15, 0.9));
    ClassDecomposition dec = class_decomposition(p);
    oracle::NaiveClasses ref = oracle::naive_classes(p);
    REQUIRE(dec.classes.size() == ref.classes.size());
    for (std::size_t k = 0; k < dec.classes.size(); ++k) {
      oracle::Mask m = oracle::to_mask(dec.classes[k]);
      bool found = false;
      for (std::size_t r = 0; r < ref.classes.size(); ++r) {
        if (ref.classes[r] == m) {
          CHECK(dec.closed[k] == ref.closed[r]);
          found = true;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("is_absorbing checks row mass retention") {
  StochasticKernel drift = make({{0.5, 0.5}, {0, 1}});
  CHECK(is_absorbing(drift, StateSet::full(2)));
  CHECK(is_absorbing(drift, StateSet::of(2, {1})));
  CHECK_FALSE(is_absorbing(drift, StateSet::of(2, {0})));
  CHECK(is_absorbing(drift, StateSet(2)));  // vacuous
}

TEST_CASE("largest_absorbing_subset closed forms") {
  StochasticKernel drift = make({{0.5, 0.5}, {0, 1}});
  CHECK(largest_absorbing_subset(drift, StateSet::full(2)) ==
        StateSet::full(2));
  CHECK(largest_absorbing_subset(drift, StateSet::of(2, {0})).empty());

  StochasticKernel blocks = cycle_plus_sink();
  CHECK(largest_absorbing_subset(blocks, StateSet::of(3, {0, 1})) ==
        StateSet::of(3, {0, 1}));
  CHECK(largest_absorbing_subset(blocks, StateSet::of(3, {0, 2})) ==
        StateSet::of(3, {2}));
}

TEST_CASE("largest_absorbing_subset equals the enumerated union") {
  Rng rng(422, 0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = rng.uniform_int(2, 10);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.15, 0.9));
    for (int rep = 0; rep < 4; ++rep) {
      oracle::Mask within = static_cast<oracle::Mask>(
          rng.next_bits() & ((oracle::Mask{1} << n) - 1));
      StateSet hull =
          largest_absorbing_subset(p, oracle::to_set(within, n));
      CHECK(oracle::to_mask(hull) ==
            oracle::largest_absorbing_submask(p, within));
    }
  }
}

TEST_CASE("indecomposability certificate closed forms") {
  IndecomposabilityCertificate split =
      indecomposability_certificate(StochasticKernel::identity(2));
  CHECK(split.verdict == IndecomposabilityCertificate::Verdict::kDecomposable);
  REQUIRE(split.witness.has_value());
  CHECK(split.witness->first == StateSet::of(2, {0}));
  CHECK(split.witness->second == StateSet::of(2, {1}));

  IndecomposabilityCertificate uni =
      indecomposability_certificate(make({{0.5, 0.5}, {0.5, 0.5}}));
  CHECK(uni.verdict == IndecomposabilityCertificate::Verdict::kIndecomposable);
  CHECK_FALSE(uni.witness.has_value());

  // Only {0} and {0,1} are absorbing here: no disjoint pair exists.
  IndecomposabilityCertificate absorb =
      indecomposability_certificate(make({{1, 0}, {0.5, 0.5}}));
  CHECK(absorb.verdict ==
        IndecomposabilityCertificate::Verdict::kIndecomposable);
}

TEST_CASE("indecomposability verdict matches exhaustive disjoint-pair scan") {
  Rng rng(423, 0);
  for (int trial = 0; trial < 60; ++trial) {
    int n = rng.uniform_int(2, 10);
    StochasticKernel p = random_kernel(rng, n, rng.uniform(0.15, 0.9));
    IndecomposabilityCertificate cert = indecomposability_certificate(p);
    bool decomposable =
        cert.verdict == IndecomposabilityCertificate::Verdict::kDecomposable;
    CHECK(decomposable == oracle::has_disjoint_absorbing_pair(p));
    if (decomposable) {
      REQUIRE(cert.witness.has_value());
      CHECK_FALSE(cert.witness->first.empty());
      CHECK_FALSE(cert.witness->second.empty());
      CHECK(cert.witness->first.disjoint_with(cert.witness->second));
      CHECK(oracle::mask_absorbing(p, oracle::to_mask(cert.witness->first)));
      CHECK(oracle::mask_absorbing(p, oracle::to_mask(cert.witness->second)));
    }
    verify_indecomposability_certificate(p, cert);
  }
}

TEST_CASE("absorbing_witness_pair splits along a separator") {
  StochasticKernel blocks = cycle_plus_sink();
  auto [b1, b2] = absorbing_witness_pair(blocks, StateSet::of(3, {0, 1}));
  CHECK(b1 == StateSet::of(3, {0, 1}));
  CHECK(b2 == StateSet::of(3, {2}));

  auto [e1, e2] = absorbing_witness_pair(blocks, StateSet(3));
  CHECK(e1.empty());
  CHECK(e2 == StateSet::full(3));

  StochasticKernel uni = make({{0.5, 0.5}, {0.5, 0.5}});
  auto [u1, u2] = absorbing_witness_pair(uni, StateSet::of(2, {0}));
  CHECK(u1.empty());
  CHECK(u2.empty());
}

TEST_CASE("certificate verification rejects tampered witnesses") {
  StochasticKernel id2 = StochasticKernel::identity(2);
  IndecomposabilityCertificate cert = indecomposability_certificate(id2);
  verify_indecomposability_certificate(id2, cert);

  IndecomposabilityCertificate forged = cert;
  forged.witness->second = StateSet::of(2, {0});  // overlaps witness 1
  CHECK_THROWS_AS(verify_indecomposability_certificate(id2, forged), Error);

  IndecomposabilityCertificate wrong;
  wrong.verdict = IndecomposabilityCertificate::Verdict::kIndecomposable;
  CHECK_THROWS_AS(verify_indecomposability_certificate(id2, wrong), Error);
}
