#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace halfstep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class Topology { Ring, Line };

class CellChain {
 public:
  CellChain(int x_min, int x_max, int cell_dim = 2, Topology topology = Topology::Ring);

  // Ring of `cells` cells labelled [-cells/2, cells - cells/2 - 1].
  static CellChain centered_ring(int cells, int cell_dim = 2);
  static CellChain centered_line(int cells, int cell_dim = 2);

  int x_min() const { return x_min_; }
  int x_max() const { return x_max_; }
  int cell_dim() const { return cell_dim_; }
  Topology topology() const { return topology_; }
  bool is_ring() const { return topology_ == Topology::Ring; }

  int num_cells() const { return x_max_ - x_min_ + 1; }
  Index dim() const { return static_cast<Index>(num_cells()) * cell_dim_; }
  bool contains(int x) const { return x >= x_min_ && x <= x_max_; }
  Index index(int x, int component) const;
  int cell_of(Index row) const { return x_min_ + static_cast<int>(row / cell_dim_); }
  int component_of(Index row) const { return static_cast<int>(row % cell_dim_); }

  // Cell distance; wraps on a ring.
  int distance(int x, int y) const;
  // Largest meaningful bandwidth on this chain.
  int band_cap() const;

  CellChain with_cell_dim(int d) const;
  // Same topology, every label doubled: [2 x_min, 2 x_max + 1].
  CellChain doubled() const;

  bool operator==(const CellChain& o) const = default;

 private:
  int x_min_;
  int x_max_;
  int cell_dim_;
  Topology topology_;
};

enum class Side { GeqA, LtA };

struct HalfChainProjection {
  int cut;
  Side side;
};

class LatticeOperator {
 public:
  LatticeOperator(CellChain chain, Matrix entries, int bandwidth);

  static LatticeOperator identity(const CellChain& chain);
  static LatticeOperator zero(const CellChain& chain);
  // Cell-diagonal operator with the given d×d block at every cell.
  static LatticeOperator local(const CellChain& chain, const std::function<Matrix(int x)>& block);

  const CellChain& chain() const { return chain_; }
  int bandwidth() const { return bandwidth_; }
  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  Matrix block(int x, int y) const;
  LatticeOperator adjoint() const;
  LatticeOperator with_bandwidth(int b) const;

  LatticeOperator operator*(const LatticeOperator& o) const;
  LatticeOperator operator+(const LatticeOperator& o) const;
  LatticeOperator operator-(const LatticeOperator& o) const;
  LatticeOperator operator*(Complex s) const;

  // max(‖O*O − 1‖, ‖OO* − 1‖)
  double unitarity_residual() const;
  double hermiticity_residual() const;
  // Largest |entry| outside the declared band; 0 for a correctly declared operator.
  double band_violation() const;
  // Smallest b with all entries beyond distance b at most tol.
  int measured_bandwidth(double tol) const;
  // Declares the measured bandwidth and zeroes the entries (all ≤ tol) beyond it.
  LatticeOperator truncated_to_band(double tol) const;

 private:
  void require_same_chain(const LatticeOperator& o) const;

  CellChain chain_;
  Matrix m_;
  int bandwidth_;
};

LatticeOperator make_shift(const CellChain& chain, int component, int power);
// Full-cell shift: every component moved by `power`.
LatticeOperator make_cell_shift(const CellChain& chain, int power);
LatticeOperator compress(const LatticeOperator& op, const HalfChainProjection& proj);
// Projection onto the cells of one side, as a diagonal operator on the full chain.
LatticeOperator projection(const CellChain& chain, const HalfChainProjection& proj);

// Exact operator norm (largest singular value).
double operator_norm(const Matrix& m);
// Cheap upper bound that is exact when it matters: Frobenius norm if small, else operator norm.
double residual_norm(const Matrix& m);

}  // namespace halfstep
