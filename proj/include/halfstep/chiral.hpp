#pragma once

#include <vector>

#include "halfstep/lattice.hpp"

namespace halfstep {

inline constexpr double kAdmissibility = 1e-10;

class ChiralGrading {
 public:
  explicit ChiralGrading(std::vector<int> signs);
  // d/2 components +1 followed by d/2 components -1.
  static ChiralGrading standard(int cell_dim = 2);

  const std::vector<int>& signs() const { return signs_; }
  int cell_dim() const { return static_cast<int>(signs_.size()); }
  int half_dim() const { return cell_dim() / 2; }

  LatticeOperator gamma(const CellChain& chain) const;
  // Rows of the full chain spanning Γ+ (resp. Γ-), cell-major.
  std::vector<Index> plus_rows(const CellChain& chain) const;
  std::vector<Index> minus_rows(const CellChain& chain) const;
  // Diagonal of γ on the chain.
  Eigen::VectorXd diagonal(const CellChain& chain) const;

  bool operator==(const ChiralGrading& o) const = default;

 private:
  std::vector<int> signs_;
};

// A: Γ+→Γ+, B: Γ-→Γ+, C: Γ+→Γ-, D: Γ-→Γ-, each on the chain with cell_dim d/2.
struct ChiralBlocks {
  LatticeOperator A, B, C, D;
};

ChiralBlocks decompose(const LatticeOperator& F, const ChiralGrading& grading);
LatticeOperator assemble(const ChiralBlocks& blocks, const ChiralGrading& grading);

// ‖γWγ − W*‖
double check_chiral(const LatticeOperator& W, const ChiralGrading& grading);

// W = [[α, β], [−β*, δ]] in the chiral splitting.
struct WalkBlocks {
  LatticeOperator alpha, beta, delta;
};
WalkBlocks walk_blocks(const LatticeOperator& W, const ChiralGrading& grading);

class HalfStepWalk {
 public:
  // Throws AdmissibilityError unless F is unitary to 1e-10.
  HalfStepWalk(LatticeOperator F, ChiralGrading grading);

  const LatticeOperator& F() const { return F_; }
  const ChiralGrading& grading() const { return grading_; }
  const CellChain& chain() const { return F_.chain(); }
  const ChiralBlocks& blocks() const { return blocks_; }
  // W = γF*γF
  const LatticeOperator& W() const { return W_; }
  // W′ = FγF*γ
  const LatticeOperator& W_prime() const { return Wp_; }

 private:
  LatticeOperator F_;
  ChiralGrading grading_;
  ChiralBlocks blocks_;
  LatticeOperator W_;
  LatticeOperator Wp_;
};

struct Timeframes {
  LatticeOperator W, W_prime;
};
Timeframes timeframes(const HalfStepWalk& walk);

}  // namespace halfstep
