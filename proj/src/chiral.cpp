#include "halfstep/chiral.hpp"

#include <string>

#include "halfstep/errors.hpp"

namespace halfstep {
namespace {

Matrix gather(const Matrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

void scatter(Matrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols, const Matrix& src) {
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) m(rows[i], cols[j]) = src(static_cast<Index>(i), static_cast<Index>(j));
}

std::vector<Index> rows_with_sign(const ChiralGrading& g, const CellChain& chain, int sign) {
  if (chain.cell_dim() != g.cell_dim()) throw GeometryError("grading does not match cell dimension");
  std::vector<Index> rows;
  for (int x = chain.x_min(); x <= chain.x_max(); ++x)
    for (int i = 0; i < g.cell_dim(); ++i)
      if (g.signs()[static_cast<std::size_t>(i)] == sign) rows.push_back(chain.index(x, i));
  return rows;
}

}  // namespace

ChiralGrading::ChiralGrading(std::vector<int> signs) : signs_(std::move(signs)) {
  int plus = 0;
  for (int s : signs_) {
    if (s != 1 && s != -1) throw GeometryError("grading signs must be +1 or -1");
    plus += s == 1;
  }
  if (signs_.empty() || 2 * plus != static_cast<int>(signs_.size()))
    throw GeometryError("grading must have as many +1 as -1 components");
}

ChiralGrading ChiralGrading::standard(int cell_dim) {
  std::vector<int> s(static_cast<std::size_t>(cell_dim), -1);
  for (int i = 0; i < cell_dim / 2; ++i) s[static_cast<std::size_t>(i)] = 1;
  return ChiralGrading(std::move(s));
}

LatticeOperator ChiralGrading::gamma(const CellChain& chain) const {
  return LatticeOperator(chain, diagonal(chain).cast<Complex>().asDiagonal(), 0);
}

Eigen::VectorXd ChiralGrading::diagonal(const CellChain& chain) const {
  if (chain.cell_dim() != cell_dim()) throw GeometryError("grading does not match cell dimension");
  Eigen::VectorXd d(chain.dim());
  for (Index r = 0; r < chain.dim(); ++r) d(r) = signs_[static_cast<std::size_t>(chain.component_of(r))];
  return d;
}

std::vector<Index> ChiralGrading::plus_rows(const CellChain& chain) const { return rows_with_sign(*this, chain, 1); }
std::vector<Index> ChiralGrading::minus_rows(const CellChain& chain) const { return rows_with_sign(*this, chain, -1); }

ChiralBlocks decompose(const LatticeOperator& F, const ChiralGrading& grading) {
  const CellChain sub = F.chain().with_cell_dim(grading.half_dim());
  const auto p = grading.plus_rows(F.chain());
  const auto m = grading.minus_rows(F.chain());
  const Matrix& f = F.matrix();
  const int b = F.bandwidth();
  return ChiralBlocks{LatticeOperator(sub, gather(f, p, p), b), LatticeOperator(sub, gather(f, p, m), b),
                      LatticeOperator(sub, gather(f, m, p), b), LatticeOperator(sub, gather(f, m, m), b)};
}

LatticeOperator assemble(const ChiralBlocks& blocks, const ChiralGrading& grading) {
  const CellChain full = blocks.A.chain().with_cell_dim(grading.cell_dim());
  const auto p = grading.plus_rows(full);
  const auto m = grading.minus_rows(full);
  Matrix f = Matrix::Zero(full.dim(), full.dim());
  scatter(f, p, p, blocks.A.matrix());
  scatter(f, p, m, blocks.B.matrix());
  scatter(f, m, p, blocks.C.matrix());
  scatter(f, m, m, blocks.D.matrix());
  const int b = std::max({blocks.A.bandwidth(), blocks.B.bandwidth(), blocks.C.bandwidth(), blocks.D.bandwidth()});
  return LatticeOperator(full, std::move(f), b);
}

double check_chiral(const LatticeOperator& W, const ChiralGrading& grading) {
  const Eigen::VectorXd g = grading.diagonal(W.chain());
  const Matrix gwg = g.cast<Complex>().asDiagonal() * W.matrix() * g.cast<Complex>().asDiagonal();
  return residual_norm(gwg - W.matrix().adjoint());
}

WalkBlocks walk_blocks(const LatticeOperator& W, const ChiralGrading& grading) {
  ChiralBlocks b = decompose(W, grading);
  return WalkBlocks{b.A, b.B, b.D};
}

HalfStepWalk::HalfStepWalk(LatticeOperator F, ChiralGrading grading)
    : F_(std::move(F)),
      grading_(std::move(grading)),
      blocks_(decompose(F_, grading_)),
      W_(LatticeOperator::zero(F_.chain())),
      Wp_(LatticeOperator::zero(F_.chain())) {
  const double res = F_.unitarity_residual();
  if (res > kAdmissibility) throw AdmissibilityError("F is not unitary (residual " + std::to_string(res) + ")");
  const LatticeOperator g = grading_.gamma(F_.chain());
  W_ = g * F_.adjoint() * g * F_;
  Wp_ = F_ * g * F_.adjoint() * g;
}

Timeframes timeframes(const HalfStepWalk& walk) { return {walk.W(), walk.W_prime()}; }

}  // namespace halfstep
