#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "halfstep/chiral.hpp"
#include "halfstep/lattice.hpp"

namespace halfstep {

struct Thresholds {
  double ker = 1e-6;  // relative to the largest singular value
  double eig = 1e-8;
  double gap = 1e-3;
  double flow_residual = 1e-8;
  double flow_error = 1e-6;
};
inline constexpr Thresholds kThresholds{};

// Cells with chain distance < radius from center.
struct Region {
  int center;
  int radius;
};
Eigen::VectorXd region_weights(const CellChain& chain, const Region& region);
// Quarter-chain around a cell.
Region quarter_region(const CellChain& chain, int center);

// Localization eigenvalues inside [lo, hi] are treated as undecidable.
struct LocalizationBand {
  double lo = 0.4;
  double hi = 0.6;
};

struct KernelCount {
  int dim_ker = 0;
  int dim_coker = 0;
  std::vector<double> singular_values_near_zero;
  std::vector<double> localization_masses;  // kernel directions, then cokernel directions
  int index() const { return dim_ker - dim_coker; }
};

KernelCount localized_kernel(const LatticeOperator& X, const Region& region, LocalizationBand band = {});
KernelCount fredholm_kernel(const LatticeOperator& X, int origin = 0);
int fredholm_index(const LatticeOperator& X, int origin = 0);
// Compresses to the cells ≥ cut and counts kernel directions in the quarter-chain next to the cut.
KernelCount half_chain_kernel(const LatticeOperator& X, int cut = 0);
int half_chain_index(const LatticeOperator& X, int cut = 0);

// Smallest singular value that is not a finite kernel direction.
double essential_gap(const LatticeOperator& X);

struct FlowResult {
  int index;
  double raw;  // the printed double sum, before the sign flip
  double residual;
  int window;
};
FlowResult flow_sum(const LatticeOperator& F, int cut = 0);
int flow_index(const LatticeOperator& F, int cut = 0);
// Flow route for an invertible non-unitary X (e.g. a block of F): flow sum of its polar
// unitary, rounded with tolerance 1/4 since its tails extend past the window.
int polar_flow_index(const LatticeOperator& X, int cut = 0);

using Symbol = std::function<Matrix(double)>;
bool is_translation_invariant(const LatticeOperator& X, double tol = 1e-12);
// k ↦ Σ_n X_{x+n, x} e^{ink}; X on a ring, translation invariant.
Symbol symbol_of(const LatticeOperator& X);
struct WindingResult {
  int winding;
  int index;
  int samples;
  double min_abs_det;
};
WindingResult winding(const Symbol& symbol, int initial_samples = 64);
int winding_index(const Symbol& symbol, int initial_samples = 64);
// Minimum over sampled k of the smallest singular value of the symbol.
double symbol_gap(const Symbol& symbol, int samples = 512);

// Orthonormal basis of the eigenspace of a unitary W at lambda = ±1 (eigenvalues within τ_eig).
Matrix eigenspace(const LatticeOperator& W, Complex lambda);

struct SymmetryIndices {
  int plus = 0;
  int minus = 0;
  int n_plus = 0;  // dimension of the (localized) eigenspace at +1
  int n_minus = 0;
};
SymmetryIndices symmetry_indices(const LatticeOperator& W, const ChiralGrading& grading,
                                 const std::optional<Region>& region = std::nullopt, LocalizationBand band = {});

struct FiveTuple {
  int ind_A = 0;
  int ind_B = 0;
  int indR_A = 0;
  int indR_B = 0;
  int indR_C = 0;
  std::array<int, 5> values() const { return {ind_A, ind_B, indR_A, indR_B, indR_C}; }
  bool operator==(const FiveTuple& o) const = default;
};

struct DerivedIndices {
  int si = 0;
  int siR = 0;
  int si_prime = 0;
  int siR_prime = 0;
  int si_plus = 0;
  int si_minus = 0;
  int indR_F = 0;
  int ind_F = 0;
  bool operator==(const DerivedIndices& o) const = default;
};
DerivedIndices derive(const FiveTuple& t);

struct Relation {
  std::string name;
  bool holds;
};

struct IndexReport {
  FiveTuple five_tuple;
  DerivedIndices derived;
  std::vector<Relation> consistency;
  CellChain chain;
  std::string route;
  bool all_hold() const;
};

enum class Route { Auto, Kernel, Winding };

struct ReportOptions {
  int cut = 0;
  int origin = 0;
  Route route = Route::Auto;
  bool eigenspace_checks = true;
};

struct BlockGaps {
  std::array<double, 4> values;  // A, B, C, D
  double min() const;
};
BlockGaps block_gaps(const HalfStepWalk& walk, bool translation_invariant);

IndexReport full_report(const HalfStepWalk& walk, const ReportOptions& options = {});
// Recomputes at the doubled chain; any integer mismatch raises ConvergenceError.
IndexReport certified_report(const std::function<HalfStepWalk(const CellChain&)>& build, const CellChain& chain,
                             const ReportOptions& options = {});

}  // namespace halfstep
