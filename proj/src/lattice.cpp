#include "halfstep/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "halfstep/errors.hpp"
#include "halfstep/linalg.hpp"
#include "halfstep/simd.hpp"

namespace halfstep {

CellChain::CellChain(int x_min, int x_max, int cell_dim, Topology topology)
    : x_min_(x_min), x_max_(x_max), cell_dim_(cell_dim), topology_(topology) {
  if (x_min >= x_max) throw GeometryError("chain needs x_min < x_max");
  if (cell_dim <= 0) throw GeometryError("cell_dim must be positive");
}

CellChain CellChain::centered_ring(int cells, int cell_dim) {
  return CellChain(-cells / 2, cells - cells / 2 - 1, cell_dim, Topology::Ring);
}

CellChain CellChain::centered_line(int cells, int cell_dim) {
  return CellChain(-cells / 2, cells - cells / 2 - 1, cell_dim, Topology::Line);
}

Index CellChain::index(int x, int component) const {
  if (!contains(x) || component < 0 || component >= cell_dim_)
    throw GeometryError("cell " + std::to_string(x) + " outside chain");
  return static_cast<Index>(x - x_min_) * cell_dim_ + component;
}

int CellChain::distance(int x, int y) const {
  int d = std::abs(x - y);
  if (is_ring()) d = std::min(d, num_cells() - d);
  return d;
}

int CellChain::band_cap() const { return is_ring() ? num_cells() / 2 : num_cells() - 1; }

CellChain CellChain::with_cell_dim(int d) const { return CellChain(x_min_, x_max_, d, topology_); }

CellChain CellChain::doubled() const {
  return CellChain(2 * x_min_, 2 * x_max_ + 1, cell_dim_, topology_);
}

LatticeOperator::LatticeOperator(CellChain chain, Matrix entries, int bandwidth)
    : chain_(std::move(chain)), m_(std::move(entries)), bandwidth_(std::min(bandwidth, chain_.band_cap())) {
  if (m_.rows() != chain_.dim() || m_.cols() != chain_.dim())
    throw GeometryError("operator size does not match chain dimension");
  if (bandwidth < 0) throw GeometryError("negative bandwidth");
}

LatticeOperator LatticeOperator::identity(const CellChain& chain) {
  return LatticeOperator(chain, Matrix::Identity(chain.dim(), chain.dim()), 0);
}

LatticeOperator LatticeOperator::zero(const CellChain& chain) {
  return LatticeOperator(chain, Matrix::Zero(chain.dim(), chain.dim()), 0);
}

LatticeOperator LatticeOperator::local(const CellChain& chain, const std::function<Matrix(int)>& block) {
  const int d = chain.cell_dim();
  Matrix m = Matrix::Zero(chain.dim(), chain.dim());
  for (int x = chain.x_min(); x <= chain.x_max(); ++x) {
    Matrix b = block(x);
    if (b.rows() != d || b.cols() != d) throw GeometryError("local block has wrong size");
    m.block(chain.index(x, 0), chain.index(x, 0), d, d) = b;
  }
  return LatticeOperator(chain, std::move(m), 0);
}

Matrix LatticeOperator::block(int x, int y) const {
  const int d = chain_.cell_dim();
  return m_.block(chain_.index(x, 0), chain_.index(y, 0), d, d);
}

LatticeOperator LatticeOperator::adjoint() const {
  return LatticeOperator(chain_, m_.adjoint(), bandwidth_);
}

LatticeOperator LatticeOperator::with_bandwidth(int b) const { return LatticeOperator(chain_, m_, b); }

void LatticeOperator::require_same_chain(const LatticeOperator& o) const {
  if (!(chain_ == o.chain_)) throw GeometryError("operators live on different chains");
}

LatticeOperator LatticeOperator::operator*(const LatticeOperator& o) const {
  require_same_chain(o);
  return LatticeOperator(chain_, m_ * o.m_, bandwidth_ + o.bandwidth_);
}

LatticeOperator LatticeOperator::operator+(const LatticeOperator& o) const {
  require_same_chain(o);
  return LatticeOperator(chain_, m_ + o.m_, std::max(bandwidth_, o.bandwidth_));
}

LatticeOperator LatticeOperator::operator-(const LatticeOperator& o) const {
  require_same_chain(o);
  return LatticeOperator(chain_, m_ - o.m_, std::max(bandwidth_, o.bandwidth_));
}

LatticeOperator LatticeOperator::operator*(Complex s) const { return LatticeOperator(chain_, m_ * s, bandwidth_); }

double LatticeOperator::unitarity_residual() const {
  const Matrix id = Matrix::Identity(m_.rows(), m_.cols());
  return std::max(residual_norm(m_.adjoint() * m_ - id), residual_norm(m_ * m_.adjoint() - id));
}

double LatticeOperator::hermiticity_residual() const { return residual_norm(m_ - m_.adjoint()); }

double LatticeOperator::band_violation() const {
  const int d = chain_.cell_dim();
  double worst = 0.0;
  for (int x = chain_.x_min(); x <= chain_.x_max(); ++x) {
    for (int y = chain_.x_min(); y <= chain_.x_max(); ++y) {
      if (chain_.distance(x, y) <= bandwidth_) continue;
      for (int j = 0; j < d; ++j) {
        const Complex* col = m_.data() + chain_.index(y, j) * m_.rows() + chain_.index(x, 0);
        worst = std::max(worst, simd::max_abs(col, static_cast<std::size_t>(d)));
      }
    }
  }
  return worst;
}

int LatticeOperator::measured_bandwidth(double tol) const {
  const int d = chain_.cell_dim();
  int b = 0;
  for (int x = chain_.x_min(); x <= chain_.x_max(); ++x) {
    for (int y = chain_.x_min(); y <= chain_.x_max(); ++y) {
      const int dist = chain_.distance(x, y);
      if (dist <= b) continue;
      for (int j = 0; j < d; ++j) {
        const Complex* col = m_.data() + chain_.index(y, j) * m_.rows() + chain_.index(x, 0);
        if (simd::max_abs(col, static_cast<std::size_t>(d)) > tol) {
          b = dist;
          break;
        }
      }
    }
  }
  return b;
}

LatticeOperator LatticeOperator::truncated_to_band(double tol) const {
  const int b = measured_bandwidth(tol);
  Matrix m = m_;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (chain_.distance(chain_.cell_of(i), chain_.cell_of(j)) > b) m(i, j) = 0.0;
  return LatticeOperator(chain_, std::move(m), b);
}

LatticeOperator make_shift(const CellChain& chain, int component, int power) {
  if (component < 0 || component >= chain.cell_dim()) throw GeometryError("shift component out of range");
  if (std::abs(power) > chain.num_cells()) throw GeometryError("shift power exceeds chain length");
  const int n = chain.num_cells();
  Matrix m = Matrix::Zero(chain.dim(), chain.dim());
  for (int x = chain.x_min(); x <= chain.x_max(); ++x) {
    for (int i = 0; i < chain.cell_dim(); ++i) {
      if (i != component) {
        m(chain.index(x, i), chain.index(x, i)) = 1.0;
        continue;
      }
      int target = x + power;
      if (chain.is_ring()) {
        target = chain.x_min() + ((target - chain.x_min()) % n + n) % n;
      } else if (!chain.contains(target)) {
        continue;
      }
      m(chain.index(target, i), chain.index(x, i)) = 1.0;
    }
  }
  return LatticeOperator(chain, std::move(m), std::abs(power));
}

LatticeOperator make_cell_shift(const CellChain& chain, int power) {
  LatticeOperator s = LatticeOperator::identity(chain);
  for (int i = 0; i < chain.cell_dim(); ++i) s = make_shift(chain, i, power) * s;
  return s.with_bandwidth(std::abs(power));
}

LatticeOperator compress(const LatticeOperator& op, const HalfChainProjection& proj) {
  const CellChain& c = op.chain();
  if (proj.cut <= c.x_min() || proj.cut > c.x_max()) throw GeometryError("cut at chain boundary");
  const int lo = proj.side == Side::GeqA ? proj.cut : c.x_min();
  const int hi = proj.side == Side::GeqA ? c.x_max() : proj.cut - 1;
  if (hi <= lo) throw GeometryError("half-chain has fewer than two cells");
  const CellChain sub(lo, hi, c.cell_dim(), Topology::Line);
  const Index start = c.index(lo, 0);
  Matrix m = op.matrix().block(start, start, sub.dim(), sub.dim());
  return LatticeOperator(sub, std::move(m), std::min(op.bandwidth(), sub.band_cap()));
}

LatticeOperator projection(const CellChain& chain, const HalfChainProjection& proj) {
  return LatticeOperator::local(chain, [&](int x) {
    const bool in = proj.side == Side::GeqA ? x >= proj.cut : x < proj.cut;
    return Matrix(Matrix::Identity(chain.cell_dim(), chain.cell_dim()) * (in ? 1.0 : 0.0));
  });
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return linalg::singular_values(m)(0);
}

double residual_norm(const Matrix& m) {
  const double fro = std::sqrt(simd::sum_abs2(m.data(), static_cast<std::size_t>(m.size())));
  if (fro <= 1e-9) return fro;
  return operator_norm(m);
}

}  // namespace halfstep
