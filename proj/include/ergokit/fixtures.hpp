#ifndef ERGOKIT_FIXTURES_HPP
#define ERGOKIT_FIXTURES_HPP

#include <optional>
#include <vector>

#include "ergokit/kernel.hpp"
#include "ergokit/types.hpp"

namespace ergokit {

// ---------------------------------------------------------------------------
// Deterministic-map-plus-noise kernel on a grid discretization of [0,1]:
// P(x, .) = (1-eps) delta_{T(x)} + eps nu, nu uniform over all cells, with
// T sending the marked cell set C to atom0 and everything else to atom1.
// With both atoms outside C the invariant mass of C has the closed form
// pi(C) = eps * lambda_C where lambda_C = |C| / grid_n.
// ---------------------------------------------------------------------------
struct FatCantorSpec {
  int grid_n = 256;
  StateSet c_cells;  // marked cells; must exclude both atoms
  double eps = 0.2;  // noise weight in (0, 1]
  int atom0 = 0;             // image of C under T
  int atom1 = 255;           // image of the complement under T

  static FatCantorSpec with_default_cells(int grid_n, double eps);
  void check() const;  // invalid_spec on violation
};

// Middle-interval removal in the style of a positive-measure Cantor set:
// level d removes the centered run of floor(grid_n / 4^d) cells from each
// surviving interval, stopping when the run underflows a cell. Boundary
// cells are excluded so they can serve as atoms.
StateSet fat_cantor_cells(int grid_n);

struct FatCantorModel {
  StochasticKernel kernel;
  ProbMeasure reference;  // invariant measure, verified at build time
  double lambda_c;        // |C| / grid_n
  double mass_on_c;       // reference(C) = eps * lambda_c
};

FatCantorModel build_fat_cantor_kernel(const FatCantorSpec& spec);

// Invariant mass of C for arbitrary atom placement: solves the scalar fixed
// point p = eps*lambda_C + (1-eps) * (p*[atom0 in C] + (1-p)*[atom1 in C]).
// Reduces to eps*lambda_C when both atoms are outside C.
double fat_cantor_mass_on_c(double eps, double lambda_c, bool atom0_in_c,
                            bool atom1_in_c);

// ---------------------------------------------------------------------------
// Two-point-map kernel: grid cells carry uniform nu; q_atoms extra states
// carry nu-mass zero (a null set surrogate). T maps every atom to alpha_cell
// and every grid cell to beta_cell. Guarantees: unique invariant measure,
// reference mass on the atoms exactly 0, and P f constant on supp(pi) with
// value (1-eps) f(beta_cell) + eps <nu, f> for every observable f.
// ---------------------------------------------------------------------------
struct TwoPointMapSpec {
  int grid_n = 256;
  int q_atoms = 1;     // number of null-mass atom states (>= 1)
  int alpha_cell = 0;  // image of the atoms, a grid cell
  int beta_cell = 1;   // image of everything else, a grid cell != alpha_cell
  double eps = 0.2;    // noise weight in (0, 1]

  void check() const;
};

struct TwoPointMapModel {
  StochasticKernel kernel;
  ProbMeasure reference;  // invariant; zero on the atoms
  StateSet atom_states;   // indices grid_n .. grid_n + q_atoms - 1
};

TwoPointMapModel build_two_point_map_kernel(const TwoPointMapSpec& spec);

// ---------------------------------------------------------------------------
// Block-diagonal kernel from smaller kernels, optionally bridged: the bridge
// moves `mass` from the first state of from_block uniformly into to_block
// (scales that row by 1-mass first). Unbridged blocks stay closed classes.
// ---------------------------------------------------------------------------
struct BridgeSpec {
  int from_block = 0;
  int to_block = 1;
  double mass = 0.1;  // in (0, 1)
};

StochasticKernel build_block_kernel(const std::vector<StochasticKernel>& blocks,
                                    const std::optional<BridgeSpec>& bridge = {});

}  // namespace ergokit

#endif  // ERGOKIT_FIXTURES_HPP
