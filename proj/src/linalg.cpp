#include "halfstep/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

#include "halfstep/errors.hpp"
#include "halfstep/simd.hpp"

namespace halfstep::linalg {

// Built on Hermitian eigensolvers: Eigen 3.4's BDCSVD returns spurious small singular
// values for matrices with large degenerate clusters (flat-band blocks).
Svd svd(const Matrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  const Index k = std::min(rows, cols);
  Svd out{Matrix::Identity(rows, rows), Eigen::VectorXd::Zero(k), Matrix::Identity(cols, cols)};
  if (m.size() == 0) return out;
  const Matrix g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es((g + g.adjoint()) * 0.5);
  out.V = es.eigenvectors().rowwise().reverse();
  const Eigen::VectorXd ev = es.eigenvalues().reverse();
  for (Index i = 0; i < k; ++i) out.s(i) = std::sqrt(std::max(ev(i), 0.0));
  // Left vectors from m v / s above the eigensolver noise floor, completed orthogonally.
  const double floor = 1e-7 * out.s(0);
  Index rank = 0;
  while (rank < k && out.s(rank) > floor) ++rank;
  Matrix range(rows, rank);
  for (Index i = 0; i < rank; ++i) {
    Vector u = m * out.V.col(i) / out.s(i);
    for (Index j = 0; j < i; ++j) u -= range.col(j) * range.col(j).dot(u);
    range.col(i) = u / u.norm();
  }
  out.U.leftCols(rank) = range;
  if (rank < rows) out.U.rightCols(rows - rank) = orth_complement(range, rows);
  return out;
}

Eigen::VectorXd singular_values(const Matrix& m) {
  const Index k = std::min(m.rows(), m.cols());
  Eigen::VectorXd s = Eigen::VectorXd::Zero(k);
  if (m.size() == 0) return s;
  const Matrix g = m.cols() <= m.rows() ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es((g + g.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues().reverse();
  for (Index i = 0; i < k; ++i) s(i) = std::sqrt(std::max(ev(i), 0.0));
  return s;
}

Matrix hermitian_sqrt(const Matrix& h, double clip) {
  if (h.size() == 0) return h;
  const Matrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -clip) throw AdmissibilityError("square root of a non-positive operator");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix polar_unitary(const Matrix& m) {
  if (m.size() == 0) return m;
  Svd s = svd(m);
  return s.U * s.V.adjoint();
}

Matrix orth_complement(const Matrix& q, Index n) {
  if (q.cols() == 0) return Matrix::Identity(n, n);
  const Matrix proj = Matrix::Identity(n, n) - q * q.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es((proj + proj.adjoint()) * 0.5);
  // eigenvalues ascending: the last n - k are ≈ 1
  return es.eigenvectors().rightCols(n - q.cols());
}

Localized diagonalize_weight(const Matrix& q, const Eigen::VectorXd& weights) {
  if (q.cols() == 0) return {q, Eigen::VectorXd()};
  const Matrix g = q.adjoint() * weights.asDiagonal() * q;
  Eigen::SelfAdjointEigenSolver<Matrix> es((g + g.adjoint()) * 0.5);
  return {q * es.eigenvectors(), es.eigenvalues()};
}

Matrix position_ordered(const Matrix& q, const Eigen::VectorXd& positions, const Eigen::VectorXd& grading) {
  if (q.cols() <= 1) return q;
  Localized byx = diagonalize_weight(q, positions);
  Matrix out(q.rows(), q.cols());
  Index col = 0;
  Index start = 0;
  const Index k = q.cols();
  while (start < k) {
    Index end = start + 1;
    while (end < k && byx.expectation(end) - byx.expectation(end - 1) < 1e-6) ++end;
    Matrix group = byx.basis.middleCols(start, end - start);
    if (group.cols() > 1) {
      Localized byg = diagonalize_weight(group, grading);
      group = byg.basis.rowwise().reverse();
    }
    out.middleCols(col, group.cols()) = group;
    col += group.cols();
    start = end;
  }
  return out;
}

NullSpace near_null(const Matrix& m, double tol, bool relative) {
  NullSpace ns;
  const Index n = m.cols();
  ns.right = Matrix(m.rows() == 0 ? 0 : n, 0);
  if (m.size() == 0) return ns;
  Svd s = svd(m);
  const Index r = s.s.size();
  ns.largest = r > 0 ? s.s(0) : 0.0;
  if (relative) tol *= ns.largest;
  Index keep = 0;
  for (Index i = 0; i < r; ++i)
    if (s.s(i) < tol) ++keep;
  // Full SVD: columns beyond the rank are exact null directions of a rectangular m.
  const Index right_null = (n - r) + keep;
  const Index left_null = (m.rows() - r) + keep;
  ns.right = s.V.rightCols(right_null);
  ns.left = s.U.rightCols(left_null);
  for (Index i = r - keep; i < r; ++i) {
    ns.right_values.push_back(s.s(i));
    ns.left_values.push_back(s.s(i));
  }
  for (Index i = 0; i < n - r; ++i) ns.right_values.push_back(0.0);
  for (Index i = 0; i < m.rows() - r; ++i) ns.left_values.push_back(0.0);
  return ns;
}

std::vector<double> masses(const Matrix& q, const Eigen::VectorXd& weights) {
  std::vector<double> out(static_cast<std::size_t>(q.cols()));
  for (Index j = 0; j < q.cols(); ++j) {
    const Vector w = weights.cwiseSqrt().cast<Complex>().cwiseProduct(q.col(j));
    out[static_cast<std::size_t>(j)] = simd::sum_abs2(w.data(), static_cast<std::size_t>(w.size()));
  }
  return out;
}

}  // namespace halfstep::linalg
