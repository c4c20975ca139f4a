#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halfstep/chiral.hpp"
#include "halfstep/homotopy.hpp"
#include "halfstep/indices.hpp"

namespace halfstep {

struct SplitStepParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
};
using AngleProfile = std::function<SplitStepParams(int x)>;

// [[cos θ, −sin θ], [sin θ, cos θ]]
Matrix rotation(double theta);

// Chiral eigenbasis (γ = diag(1, −1)): F = R(θ₂/2 − π/4) S↑ R(θ₁/2 + π/4).
LatticeOperator splitstep_operator(const AngleProfile& angles, const CellChain& chain);
HalfStepWalk splitstep_halfstep(const SplitStepParams& p, const CellChain& chain);
HalfStepWalk splitstep_halfstep(const AngleProfile& angles, const CellChain& chain);

// The same walk in the basis where γ = σ₁ per cell.
LatticeOperator splitstep_halfstep_sigma1(const AngleProfile& angles, const CellChain& chain);
// R(θ₁/2) S↓ R(θ₂) S↑ R(θ₁/2)
LatticeOperator splitstep_walk_sigma1(const AngleProfile& angles, const CellChain& chain);
// Per-cell R(−π/4): takes the σ₁ basis to the chiral eigenbasis.
LatticeOperator chiral_basis_change(const CellChain& chain);

enum class Patch { I = 1, II = 2, III = 3, IV = 4 };
std::string_view patch_name(Patch p);
// Interior flat-band point of each patch.
SplitStepParams patch_point(Patch p);

struct PhasePoint {
  double theta1 = 0.0;
  double theta2 = 0.0;
  bool gapped = false;
  double gap = 0.0;
  int indR_A = 0;
  int indR_B = 0;
  int indR_C = 0;
  int siR_W = 0;
  int siR_Wp = 0;
  int indR_F = 0;
};

PhasePoint phase_point(const SplitStepParams& p, const CellChain& chain);
// θ_j = −π + (j + ½)·2π/n
std::vector<double> offset_grid(int n);
std::vector<PhasePoint> harlequin(const std::vector<SplitStepParams>& points, const CellChain& chain, int workers);
// Row-major over θ₁ then θ₂.
std::vector<PhasePoint> harlequin_grid(int n1, int n2, const CellChain& chain, int workers);
// Classification by (siR_W, siR_Wp) per the figure legend; empty at gap closures.
std::optional<Patch> patch_of(const PhasePoint& p);

struct CrossoverSpec {
  SplitStepParams left;
  SplitStepParams right;
  int interface_cell = 0;
  int transition_width = 0;  // 0: hard step
};

AngleProfile crossover_profile(const CrossoverSpec& spec, const CellChain& chain);
HalfStepWalk crossover_walk(const CrossoverSpec& spec, const CellChain& chain);

struct FrameCounts {
  int n_plus = 0;
  int n_minus = 0;
  int si_plus = 0;
  int si_minus = 0;
};

struct EdgeState {
  std::string frame;  // "W" or "W'"
  int eigenvalue;     // ±1
  int interface_cell;
  int chirality;
  double mass;
};

struct InterfaceReport {
  int cell = 0;
  bool wrap = false;
  SplitStepParams left;
  SplitStepParams right;
  FrameCounts W;
  FrameCounts Wp;
  int predicted_2si_plus = 0;
  int predicted_2si_minus = 0;
  bool formula_holds = false;
  bool index_condition = false;
};

struct CrossoverReport {
  CrossoverSpec spec;
  PhasePoint left_bulk;
  PhasePoint right_bulk;
  std::vector<InterfaceReport> interfaces;
  std::vector<EdgeState> states;
  std::vector<Complex> spectrum_W;
  std::vector<Complex> spectrum_Wp;
};

// Attribution threshold 0.9 within a quarter ring of each interface.
CrossoverReport crossover(const CrossoverSpec& spec, const CellChain& chain);

enum class NamedHalfStep { F1, F2, F3 };
std::string_view named_halfstep_name(NamedHalfStep n);
// F₁ = (1/√2)[[S, −S], [1, 1]], F₂ = (1/√2)[[1, 1], [−S, S]], F₃ = (1/√2)[[−S, −S], [1, −1]]
HalfStepWalk named_halfstep(NamedHalfStep n, const CellChain& chain);
// (1/√2)[[e^{iπt}S, −S], [1, e^{−iπt}]]: F₁ at t = 0, F₃ at t = 1.
HalfStepWalk phase_bridge(double t, const CellChain& chain);
// t ↦ polar part of (1 − t)F_a + tF_b
PathSpec linear_renormalized_path(const HalfStepWalk& a, const HalfStepWalk& b, int samples);

struct BridgeOutcome {
  enum class Kind { Path, NoBridge, NonConstructive };
  Kind kind = Kind::NoBridge;
  FiveTuple from;
  FiveTuple to;
  std::vector<std::string> differing;
  std::optional<PathSpec> path;
  std::string note;
};
BridgeOutcome bridge_path(NamedHalfStep from, NamedHalfStep to, const CellChain& chain, int samples = 21);

struct NongentleResult {
  int half_length;
  HalfStepWalk original;   // split-step at (0, π/2), chiral basis, ring [−L, L−1]
  HalfStepWalk perturbed;  // σ₁-conjugated shift on the cells ≥ 0
  double w_outside;        // largest |W̃ − W| entry away from the two defects
  double f_far_half;       // ‖(F̃ − F) restricted to cells [L/2, L−1]‖
  SymmetryIndices si_before;
  SymmetryIndices si_after;  // both near cell 0
};
NongentleResult nongentle_perturbation(int half_length);
// W + (W̃ − W) kept only near cell 0: a W with a single defect and nonzero global si₋.
LatticeOperator nongentle_single_defect(int half_length);

}  // namespace halfstep
