#include "ergokit/fixtures.hpp"

#include <cmath>
#include <sstream>

#include "ergokit/invariant.hpp"

namespace ergokit {

namespace {

[[noreturn]] void bad_spec(const std::string& what) {
  throw Error(errc::invalid_spec, what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Fat-Cantor-style kernel
// ---------------------------------------------------------------------------

StateSet fat_cantor_cells(int grid_n) {
  if (grid_n < 4) bad_spec("grid too small for middle-interval removal");
  std::vector<bool> removed(grid_n, false);
  // Depth-d removal takes floor(grid_n / 4^d) cells out of the center of
  // each surviving interval; total removed mass stays near 1/2, leaving a
  // positive-measure nowhere-dense cell set.
  struct Span {
    int lo, hi, depth;
  };
  std::vector<Span> work{{0, grid_n, 1}};
  while (!work.empty()) {
    auto [lo, hi, depth] = work.back();
    work.pop_back();
    long long denom = 1;
    for (int d = 0; d < depth; ++d) denom *= 4;
    int cut = static_cast<int>(grid_n / denom);
    if (cut < 1 || hi - lo <= cut) continue;
    // Keep (span - cut) even so the removal is centered exactly and the
    // whole construction stays mirror-symmetric.
    if ((hi - lo - cut) % 2 != 0) ++cut;
    if (hi - lo <= cut) continue;
    int mid_lo = lo + (hi - lo - cut) / 2;
    int mid_hi = mid_lo + cut;
    for (int i = mid_lo; i < mid_hi; ++i) removed[i] = true;
    work.push_back({lo, mid_lo, depth + 1});
    work.push_back({mid_hi, hi, depth + 1});
  }
  StateSet cells(grid_n);
  // Boundary cells stay out so they can serve as the map's two atoms.
  for (int i = 1; i + 1 < grid_n; ++i)
    if (!removed[i]) cells.insert(i);
  return cells;
}

FatCantorSpec FatCantorSpec::with_default_cells(int grid_n, double eps) {
  FatCantorSpec spec;
  spec.grid_n = grid_n;
  spec.c_cells = fat_cantor_cells(grid_n);
  spec.eps = eps;
  spec.atom0 = 0;
  spec.atom1 = grid_n - 1;
  spec.check();
  return spec;
}

void FatCantorSpec::check() const {
  if (grid_n < 2) bad_spec("grid needs at least two cells");
  if (!(eps > 0.0) || eps > 1.0 || !std::isfinite(eps))
    bad_spec("noise weight outside (0, 1]");
  if (atom0 < 0 || atom0 >= grid_n || atom1 < 0 || atom1 >= grid_n)
    bad_spec("atom outside the grid");
  if (atom0 == atom1) bad_spec("atoms must be distinct");
  if (c_cells.universe_size() != grid_n)
    bad_spec("cell set universe differs from grid");
  if (c_cells.empty() || c_cells.count() == grid_n)
    bad_spec("marked cells must be a proper nonempty subset");
  if (c_cells.contains(atom0) || c_cells.contains(atom1))
    bad_spec("atoms must lie outside the marked cells");
}

double fat_cantor_mass_on_c(double eps, double lambda_c, bool atom0_in_c,
                            bool atom1_in_c) {
  // p = eps*lambda_C + (1-eps) * ( p*[atom0 in C] + (1-p)*[atom1 in C] )
  double base = eps * lambda_c + (atom1_in_c ? (1.0 - eps) : 0.0);
  double slope =
      (atom0_in_c ? (1.0 - eps) : 0.0) - (atom1_in_c ? (1.0 - eps) : 0.0);
  return base / (1.0 - slope);
}

FatCantorModel build_fat_cantor_kernel(const FatCantorSpec& spec) {
  spec.check();
  const int n = spec.grid_n;
  const double nu = 1.0 / n;  // uniform reference measure per cell

  Eigen::MatrixXd rows = Eigen::MatrixXd::Constant(n, n, spec.eps * nu);
  for (int x = 0; x < n; ++x) {
    int target = spec.c_cells.contains(x) ? spec.atom0 : spec.atom1;
    rows(x, target) += 1.0 - spec.eps;
  }
  StochasticKernel kernel = StochasticKernel::validate(std::move(rows));

  double lambda_c = static_cast<double>(spec.c_cells.count()) / n;
  double mass_on_c = spec.eps * lambda_c;  // atoms are outside C

  // pi = eps*nu + (1-eps) * ( p*delta_atom0 + (1-p)*delta_atom1 ).
  Eigen::VectorXd ref = Eigen::VectorXd::Constant(n, spec.eps * nu);
  ref[spec.atom0] += (1.0 - spec.eps) * mass_on_c;
  ref[spec.atom1] += (1.0 - spec.eps) * (1.0 - mass_on_c);
  ProbMeasure reference = ProbMeasure::validated(std::move(ref));

  if (!is_invariant(kernel, reference, 1e-12))
    throw Error(errc::certificate_invariant,
                "closed-form reference measure failed invariance");
  return FatCantorModel{std::move(kernel), std::move(reference), lambda_c,
                        mass_on_c};
}

// ---------------------------------------------------------------------------
// Two-point-map kernel
// ---------------------------------------------------------------------------

void TwoPointMapSpec::check() const {
  if (grid_n < 2) bad_spec("grid needs at least two cells");
  if (q_atoms < 1) bad_spec("need at least one null-mass atom");
  if (!(eps > 0.0) || eps > 1.0 || !std::isfinite(eps))
    bad_spec("noise weight outside (0, 1]");
  if (alpha_cell < 0 || alpha_cell >= grid_n || beta_cell < 0 ||
      beta_cell >= grid_n)
    bad_spec("map images must be grid cells");
  if (alpha_cell == beta_cell) bad_spec("map images must be distinct");
}

TwoPointMapModel build_two_point_map_kernel(const TwoPointMapSpec& spec) {
  spec.check();
  const int cells = spec.grid_n;
  const int n = cells + spec.q_atoms;  // atoms appended after the grid
  const double nu = 1.0 / cells;       // reference charges only the grid

  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    int target = x >= cells ? spec.alpha_cell : spec.beta_cell;
    for (int j = 0; j < cells; ++j) rows(x, j) = spec.eps * nu;
    rows(x, target) += 1.0 - spec.eps;
  }
  StochasticKernel kernel = StochasticKernel::validate(std::move(rows));

  // Unique invariant measure: nothing ever enters the atoms (they carry no
  // reference mass and are nobody's image), so pi = (1-eps) delta_beta +
  // eps nu on the grid and exactly zero on the atoms.
  Eigen::VectorXd ref = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < cells; ++j) ref[j] = spec.eps * nu;
  ref[spec.beta_cell] += 1.0 - spec.eps;
  ProbMeasure reference = ProbMeasure::validated(std::move(ref));

  if (!is_invariant(kernel, reference, 1e-12))
    throw Error(errc::certificate_invariant,
                "two-point-map reference measure failed invariance");

  StateSet atoms(n);
  for (int a = cells; a < n; ++a) atoms.insert(a);
  return TwoPointMapModel{std::move(kernel), std::move(reference),
                          std::move(atoms)};
}

// ---------------------------------------------------------------------------
// Block-diagonal kernel
// ---------------------------------------------------------------------------

StochasticKernel build_block_kernel(const std::vector<StochasticKernel>& blocks,
                                    const std::optional<BridgeSpec>& bridge) {
  if (blocks.empty()) bad_spec("need at least one block");
  int n = 0;
  std::vector<int> offset;
  for (const StochasticKernel& b : blocks) {
    offset.push_back(n);
    n += b.size();
  }
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    rows.block(offset[k], offset[k], blocks[k].size(), blocks[k].size()) =
        blocks[k].matrix();

  if (bridge) {
    const int nb = static_cast<int>(blocks.size());
    if (bridge->from_block < 0 || bridge->from_block >= nb ||
        bridge->to_block < 0 || bridge->to_block >= nb ||
        bridge->from_block == bridge->to_block)
      bad_spec("bridge endpoints must be two distinct blocks");
    if (!(bridge->mass > 0.0) || !(bridge->mass < 1.0))
      bad_spec("bridge mass outside (0, 1)");
    int src = offset[bridge->from_block];  // first state of the source block
    int dst = offset[bridge->to_block];
    int dst_size = blocks[bridge->to_block].size();
    rows.row(src) *= 1.0 - bridge->mass;
    for (int j = 0; j < dst_size; ++j)
      rows(src, dst + j) += bridge->mass / dst_size;
  }
  return StochasticKernel::validate(std::move(rows));
}

}  // namespace ergokit
