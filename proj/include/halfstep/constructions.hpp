#pragma once

#include <array>
#include <functional>
#include <optional>

#include "halfstep/chiral.hpp"
#include "halfstep/indices.hpp"

namespace halfstep {

struct GeneratingParams {
  int n_L = 0;
  int m_L = 0;
  int n_R = 0;
  int m_R = 0;
  int k = 0;
  std::array<int, 5> values() const { return {n_L, m_L, n_R, m_R, k}; }
};

// Integer matrix taking (n_L, m_L, n_R, m_R, k) to the five-tuple.
Eigen::Matrix<int, 5, 5> generating_matrix();
FiveTuple generating_tuple(const GeneratingParams& p);

// U(n,m) = (1/√2)[[Sⁿ, Sᵐ], [−S⁻ᵐ, S⁻ⁿ]] on a chain with two components per cell.
LatticeOperator pre_generating_unitary(int n, int m, const CellChain& chain);

// Polar isometry of X completed by pairing near-zero right and left singular
// directions in order of position. Throws IndexObstruction when they cannot be
// paired locally.
LatticeOperator unitarize(const LatticeOperator& X);

// F = T(k)(U_L ⊕ U_R), decoupled at cell 0 and at the antipode of a ring.
HalfStepWalk generating_example(const GeneratingParams& params, const CellChain& chain);

HalfStepWalk construct_halfstep(const LatticeOperator& W, const ChiralGrading& grading);

struct StandardForm {
  // Orthonormal bases (columns, full-space vectors).
  Matrix ker_A, ker_B, ker_C, ker_D;
  Matrix coker_A, coker_B, coker_C, coker_D;
  // F_minus: ker A ⊕ ker D → ker A* ⊕ ker D*, antidiagonal.
  Matrix F_minus;
  // F_plus: ker C ⊕ ker B → ker B* ⊕ ker C*, diagonal.
  Matrix F_plus;
  // K = K+ ⊕ K-, K′ = K′+ ⊕ K′-; F_K = K′* F K.
  Matrix K_plus, K_minus, Kp_plus, Kp_minus;
  Matrix F_K;
  double reassembly_residual = 0.0;

  bool finite_summands_empty() const { return F_minus.size() == 0 && F_plus.size() == 0; }
};

StandardForm standard_form(const HalfStepWalk& walk);

// Kernel dimensions of the four blocks counted near a region.
struct LocalKernelDims {
  std::array<int, 4> ker;
  std::array<int, 4> coker;
};
LocalKernelDims local_kernel_dims(const HalfStepWalk& walk, const Region& region);

struct FlattenResult {
  std::function<HalfStepWalk(double)> path;  // t = 0 gives F, t = 1 the flat operator
  HalfStepWalk flat;
};
FlattenResult flatten(const HalfStepWalk& walk);

// F₀ = (1/√2)[[1, 1], [1, −1]] per cell.
HalfStepWalk reference_halfstep(const CellChain& chain);
// (1/√2)[[S⁻ᵃ, S⁻ᵇ], [S⁻ᶜ, −S^{a−b−c}]]
HalfStepWalk shift_content_halfstep(int a, int b, int c, const CellChain& chain);

// Sᵃ on Γ+ and Sᶜ on Γ-.
LatticeOperator graded_shift(const CellChain& chain, const ChiralGrading& grading, int plus_power, int minus_power);

struct Normalization {
  int a = 0;
  int b = 0;
  int c = 0;
  LatticeOperator left;   // diag(Sᵃ, Sᶜ)
  LatticeOperator right;  // diag(1, S^{b−a})
  HalfStepWalk normalized;
  IndexReport report;     // of the normalized operator
  int flow_index;         // of the normalized operator
};
Normalization normalize_to_reference(const HalfStepWalk& walk, const ReportOptions& options = {});

}  // namespace halfstep
