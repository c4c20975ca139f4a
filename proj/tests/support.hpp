#pragma once

#include <Eigen/Eigenvalues>
#include <random>

#include "halfstep/chiral.hpp"
#include "halfstep/lattice.hpp"

namespace halfstep::support {

// Hermitian H with H_{xy} = 0 for cell distance > bandwidth, entries of size ~scale.
inline LatticeOperator random_banded_hermitian(const CellChain& chain, int bandwidth, double scale, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Matrix h = Matrix::Zero(chain.dim(), chain.dim());
  for (Index i = 0; i < chain.dim(); ++i)
    for (Index j = 0; j <= i; ++j)
      if (chain.distance(chain.cell_of(i), chain.cell_of(j)) <= bandwidth) {
        h(i, j) = scale * Complex(nd(rng), i == j ? 0.0 : nd(rng));
        h(j, i) = std::conj(h(i, j));
      }
  return LatticeOperator(chain, h, bandwidth);
}

inline LatticeOperator expi(const LatticeOperator& h, double tol = 1e-13) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  const Eigen::VectorXcd phases = es.eigenvalues().unaryExpr([](double x) { return std::exp(Complex(0, x)); });
  Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return LatticeOperator(h.chain(), std::move(u), h.chain().band_cap()).truncated_to_band(tol);
}

// exp(iK) with K = [[0, X], [X*, 0]] in the chiral splitting, so γWγ = W*. X = 1.5 V + small
// banded noise keeps the singular values of X, hence the spectrum of W, away from ±1.
inline LatticeOperator random_chiral_walk(const CellChain& chain, std::mt19937& rng) {
  const CellChain half = chain.with_cell_dim(chain.cell_dim() / 2);
  const LatticeOperator v = expi(random_banded_hermitian(half, 1, 0.6, rng));
  const LatticeOperator noise = random_banded_hermitian(half, 1, 0.1, rng);
  const Matrix x = 1.5 * v.matrix() + noise.matrix();
  const ChiralGrading g = ChiralGrading::standard(chain.cell_dim());
  const LatticeOperator zero = LatticeOperator::zero(half);
  const LatticeOperator xo(half, x, half.band_cap());
  const LatticeOperator k = assemble(ChiralBlocks{zero, xo, xo.adjoint(), zero}, g);
  return expi(k);
}

inline int count_near(const Eigen::VectorXcd& ev, Complex z, double tol) {
  int n = 0;
  for (Index i = 0; i < ev.size(); ++i) n += std::abs(ev(i) - z) <= tol;
  return n;
}

inline Eigen::VectorXcd spectrum(const LatticeOperator& u) {
  Eigen::ComplexEigenSolver<Matrix> es(u.matrix(), false);
  return es.eigenvalues();
}

}  // namespace halfstep::support
