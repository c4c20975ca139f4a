#include "halfstep/constructions.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <sstream>

#include "halfstep/errors.hpp"
#include "halfstep/linalg.hpp"

namespace halfstep {
namespace {

constexpr double kBandTol = 1e-13;

Eigen::VectorXd cell_positions(const CellChain& c) {
  Eigen::VectorXd p(c.dim());
  for (Index r = 0; r < c.dim(); ++r) p(r) = c.cell_of(r);
  return p;
}

Eigen::VectorXd component_labels(const CellChain& c) {
  Eigen::VectorXd p(c.dim());
  for (Index r = 0; r < c.dim(); ++r) p(r) = -c.component_of(r);
  return p;
}

// Columns of the identity selecting the given rows: n × rows.size().
Matrix selector(Index n, const std::vector<Index>& rows) {
  Matrix s = Matrix::Zero(n, static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) s(rows[i], static_cast<Index>(i)) = 1.0;
  return s;
}

Matrix hcat(std::initializer_list<const Matrix*> parts, Index rows) {
  Index cols = 0;
  for (const Matrix* p : parts) cols += p->cols();
  Matrix out(rows, cols);
  Index at = 0;
  for (const Matrix* p : parts) {
    out.middleCols(at, p->cols()) = *p;
    at += p->cols();
  }
  return out;
}

double expectation(const Vector& v, const Eigen::VectorXd& weights) {
  return (v.cwiseAbs2().array() * weights.array()).sum();
}

struct ChiralSplit {
  Matrix plus;
  Matrix minus;
};

ChiralSplit split_by_chirality(const Matrix& q, const Eigen::VectorXd& g) {
  linalg::Localized loc = linalg::diagonalize_weight(q, g);
  std::vector<Index> plus;
  std::vector<Index> minus;
  for (Index i = 0; i < loc.expectation.size(); ++i) {
    const double e = loc.expectation(i);
    if (std::abs(std::abs(e) - 1.0) > 1e-6)
      throw ConvergenceError("eigenspace at ±1 is not invariant under the grading");
    (e > 0 ? plus : minus).push_back(i);
  }
  ChiralSplit s{Matrix(q.rows(), static_cast<Index>(plus.size())), Matrix(q.rows(), static_cast<Index>(minus.size()))};
  for (std::size_t i = 0; i < plus.size(); ++i) s.plus.col(static_cast<Index>(i)) = loc.basis.col(plus[i]);
  for (std::size_t i = 0; i < minus.size(); ++i) s.minus.col(static_cast<Index>(i)) = loc.basis.col(minus[i]);
  return s;
}

// Full-space vectors spanning the orthogonal complement of `q` inside the coordinate subspace `sel`.
Matrix complement_within(const Matrix& sel, const Matrix& q) {
  return sel * linalg::orth_complement(sel.adjoint() * q, sel.cols());
}

struct BlockKernels {
  Matrix ker;
  Matrix coker;
};

BlockKernels block_kernels(const LatticeOperator& X, const Matrix& dom_sel, const Matrix& cod_sel,
                           const Eigen::VectorXd& pos, const Eigen::VectorXd& comp) {
  const linalg::NullSpace ns = linalg::near_null(X.matrix(), kThresholds.ker, true);
  return {linalg::position_ordered(dom_sel * ns.right, pos, comp),
          linalg::position_ordered(cod_sel * ns.left, pos, comp)};
}

}  // namespace

Eigen::Matrix<int, 5, 5> generating_matrix() {
  Eigen::Matrix<int, 5, 5> m;
  m << 1, 0, -1, 0, 0,
       0, 1, 0, -1, 0,
       0, 0, -1, 0, -1,
       0, 0, 0, -1, -1,
       0, 0, 0, 1, 0;
  return m;
}

FiveTuple generating_tuple(const GeneratingParams& p) {
  const auto v = p.values();
  const Eigen::Matrix<int, 5, 1> x = generating_matrix() * Eigen::Map<const Eigen::Matrix<int, 5, 1>>(v.data());
  return FiveTuple{x(0), x(1), x(2), x(3), x(4)};
}

LatticeOperator pre_generating_unitary(int n, int m, const CellChain& chain) {
  if (chain.cell_dim() != 2) throw GeometryError("generating example needs two components per cell");
  const CellChain sub = chain.with_cell_dim(1);
  const double r = 1.0 / std::sqrt(2.0);
  return assemble(ChiralBlocks{make_shift(sub, 0, n) * r, make_shift(sub, 0, m) * r,
                               make_shift(sub, 0, -m) * (-r), make_shift(sub, 0, -n) * r},
                  ChiralGrading::standard(2));
}

LatticeOperator unitarize(const LatticeOperator& X) {
  const CellChain& c = X.chain();
  const Index n = X.dim();
  const linalg::Svd s = linalg::svd(X.matrix());
  const double tol = kThresholds.ker * s.s(0);
  Index big = 0;
  while (big < s.s.size() && s.s(big) >= tol) ++big;
  if (big > 0 && s.s(big - 1) <= kThresholds.gap) {
    std::ostringstream msg;
    msg << "singular value " << s.s(big - 1) << " in the gap between kernel and range: no unitarization";
    throw AdmissibilityError(msg.str());
  }
  Matrix u = s.U.leftCols(big) * s.V.leftCols(big).adjoint();
  const Eigen::VectorXd pos = cell_positions(c);
  const Eigen::VectorXd comp = component_labels(c);
  const Matrix ker = linalg::position_ordered(s.V.rightCols(n - big), pos, comp);
  const Matrix coker = linalg::position_ordered(s.U.rightCols(n - big), pos, comp);
  const double reach = std::max(1, c.num_cells() / 4);
  for (Index i = 0; i < ker.cols(); ++i) {
    const double dx = std::abs(expectation(ker.col(i), pos) - expectation(coker.col(i), pos));
    if (dx > reach) throw IndexObstruction("nonzero index: no unitarization (kernel and cokernel far apart)");
  }
  u += coker * ker.adjoint();
  return LatticeOperator(c, std::move(u), c.band_cap()).truncated_to_band(kBandTol);
}

HalfStepWalk generating_example(const GeneratingParams& params, const CellChain& chain) {
  if (!chain.is_ring()) throw GeometryError("generating example is built on a ring");
  if (chain.cell_dim() != 2) throw GeometryError("generating example needs two components per cell");
  if (chain.x_min() >= -1 || chain.x_max() < 1) throw GeometryError("cell 0 must be interior");
  const int budget = chain.num_cells() / 8;
  for (int v : params.values())
    if (std::abs(v) > budget) throw GeometryError("generating parameters exceed the bandwidth budget N/8");

  const LatticeOperator left = unitarize(compress(pre_generating_unitary(params.n_L, params.m_L, chain), {0, Side::LtA}));
  const LatticeOperator right = unitarize(compress(pre_generating_unitary(params.n_R, params.m_R, chain), {0, Side::GeqA}));
  Matrix m = Matrix::Zero(chain.dim(), chain.dim());
  m.topLeftCorner(left.dim(), left.dim()) = left.matrix();
  m.bottomRightCorner(right.dim(), right.dim()) = right.matrix();
  const LatticeOperator decoupled(chain, std::move(m), std::max(left.bandwidth(), right.bandwidth()));
  return HalfStepWalk(make_shift(chain, 0, params.k) * decoupled, ChiralGrading::standard(2));
}

HalfStepWalk construct_halfstep(const LatticeOperator& W, const ChiralGrading& grading) {
  const CellChain& c = W.chain();
  if (W.unitarity_residual() > kAdmissibility) throw AdmissibilityError("W is not unitary");
  if (check_chiral(W, grading) > kAdmissibility) throw AdmissibilityError("W is not chiral symmetric");
  const Index n = W.dim();
  const Eigen::VectorXd g = grading.diagonal(c);
  const Eigen::VectorXd pos = cell_positions(c);

  const ChiralSplit e_plus = split_by_chirality(eigenspace(W, 1.0), g);
  const ChiralSplit e_minus = split_by_chirality(eigenspace(W, -1.0), g);
  const Matrix ker_C = linalg::position_ordered(e_plus.plus, pos, g);
  const Matrix ker_B = linalg::position_ordered(e_plus.minus, pos, g);
  const Matrix ker_A = linalg::position_ordered(e_minus.plus, pos, g);
  const Matrix ker_D = linalg::position_ordered(e_minus.minus, pos, g);
  if (ker_A.cols() != ker_D.cols()) {
    std::ostringstream msg;
    msg << "si_-(W) = " << ker_A.cols() - ker_D.cols()
        << " on a finite ring: no half-step operator exists for this W";
    throw IndexObstruction(msg.str());
  }

  const Matrix sel_plus = selector(n, grading.plus_rows(c));
  const Matrix sel_minus = selector(n, grading.minus_rows(c));
  const Matrix q_plus = complement_within(sel_plus, hcat({&ker_A, &ker_C}, n));
  const Matrix q_minus = complement_within(sel_minus, hcat({&ker_B, &ker_D}, n));
  if (q_plus.cols() != q_minus.cols()) throw ConvergenceError("gapped part has unequal chiral dimensions");

  const Matrix& w = W.matrix();
  const Matrix alpha = q_plus.adjoint() * w * q_plus;
  const Matrix beta = q_plus.adjoint() * w * q_minus;
  const Matrix delta = q_minus.adjoint() * w * q_minus;
  const Index k = q_plus.cols();
  Matrix ft(2 * k, 2 * k);
  if (k > 0) {
    const double smallest = linalg::singular_values(beta)(k - 1);
    if (smallest < kThresholds.eig) {
      std::ostringstream msg;
      msg << "beta is singular on the gapped part (smallest singular value " << smallest
          << "): inconsistent gap classification";
      throw AdmissibilityError(msg.str());
    }
    const Matrix id = Matrix::Identity(k, k);
    const Matrix vb = linalg::polar_unitary(beta);
    const double r = 1.0 / std::sqrt(2.0);
    ft.topLeftCorner(k, k) = linalg::hermitian_sqrt(id + alpha) * r;
    ft.topRightCorner(k, k) = vb * linalg::hermitian_sqrt(id - delta) * r;
    ft.bottomLeftCorner(k, k) = -vb.adjoint() * linalg::hermitian_sqrt(id - alpha) * r;
    ft.bottomRightCorner(k, k) = linalg::hermitian_sqrt(id + delta) * r;
  }
  const Matrix q = hcat({&q_plus, &q_minus}, n);
  Matrix f = q * ft * q.adjoint();
  // F₋ swaps ker A and ker D, F₊ fixes ker C and ker B; identity pairings of ordered bases.
  f += ker_D * ker_A.adjoint() + ker_A * ker_D.adjoint();
  f += ker_C * ker_C.adjoint() + ker_B * ker_B.adjoint();
  return HalfStepWalk(LatticeOperator(c, std::move(f), c.band_cap()).truncated_to_band(kBandTol), grading);
}

StandardForm standard_form(const HalfStepWalk& walk) {
  const CellChain& c = walk.chain();
  const Index n = c.dim();
  const Eigen::VectorXd pos = cell_positions(c);
  const Eigen::VectorXd g = walk.grading().diagonal(c);
  const Matrix sp = selector(n, walk.grading().plus_rows(c));
  const Matrix sm = selector(n, walk.grading().minus_rows(c));
  const ChiralBlocks& b = walk.blocks();
  const BlockKernels ka = block_kernels(b.A, sp, sp, pos, g);
  const BlockKernels kb = block_kernels(b.B, sm, sp, pos, g);
  const BlockKernels kc = block_kernels(b.C, sp, sm, pos, g);
  const BlockKernels kd = block_kernels(b.D, sm, sm, pos, g);

  StandardForm sf;
  sf.ker_A = ka.ker;
  sf.ker_B = kb.ker;
  sf.ker_C = kc.ker;
  sf.ker_D = kd.ker;
  sf.coker_A = ka.coker;
  sf.coker_B = kb.coker;
  sf.coker_C = kc.coker;
  sf.coker_D = kd.coker;
  if (sf.ker_A.cols() != sf.coker_D.cols() || sf.ker_D.cols() != sf.coker_A.cols() ||
      sf.ker_C.cols() != sf.coker_B.cols() || sf.ker_B.cols() != sf.coker_C.cols())
    throw ConvergenceError("kernel dimensions do not pair up: numerical rank misclassification");

  const Matrix& f = walk.F().matrix();
  const Matrix dom_minus = hcat({&sf.ker_A, &sf.ker_D}, n);
  const Matrix cod_minus = hcat({&sf.coker_A, &sf.coker_D}, n);
  const Matrix dom_plus = hcat({&sf.ker_C, &sf.ker_B}, n);
  const Matrix cod_plus = hcat({&sf.coker_B, &sf.coker_C}, n);
  sf.F_minus = cod_minus.adjoint() * f * dom_minus;
  sf.F_plus = cod_plus.adjoint() * f * dom_plus;
  for (const Matrix* fin : {&sf.F_minus, &sf.F_plus}) {
    if (fin->size() == 0) continue;
    const Matrix id = Matrix::Identity(fin->rows(), fin->cols());
    if (residual_norm(fin->adjoint() * *fin - id) > 1e-8)
      throw ConvergenceError("finite summand is not unitary: numerical rank misclassification");
  }

  sf.K_plus = complement_within(sp, hcat({&sf.ker_A, &sf.ker_C}, n));
  sf.K_minus = complement_within(sm, hcat({&sf.ker_B, &sf.ker_D}, n));
  sf.Kp_plus = complement_within(sp, hcat({&sf.coker_A, &sf.coker_B}, n));
  sf.Kp_minus = complement_within(sm, hcat({&sf.coker_C, &sf.coker_D}, n));
  const Matrix k = hcat({&sf.K_plus, &sf.K_minus}, n);
  const Matrix kp = hcat({&sf.Kp_plus, &sf.Kp_minus}, n);
  sf.F_K = kp.adjoint() * f * k;
  const Matrix rebuilt =
      cod_minus * sf.F_minus * dom_minus.adjoint() + cod_plus * sf.F_plus * dom_plus.adjoint() + kp * sf.F_K * k.adjoint();
  sf.reassembly_residual = residual_norm(rebuilt - f);
  return sf;
}

LocalKernelDims local_kernel_dims(const HalfStepWalk& walk, const Region& region) {
  const ChiralBlocks& b = walk.blocks();
  LocalKernelDims out{};
  const LatticeOperator* blocks[4] = {&b.A, &b.B, &b.C, &b.D};
  for (std::size_t i = 0; i < 4; ++i) {
    const KernelCount kc = localized_kernel(*blocks[i], region);
    out.ker[i] = kc.dim_ker;
    out.coker[i] = kc.dim_coker;
  }
  return out;
}

FlattenResult flatten(const HalfStepWalk& walk) {
  const StandardForm sf = standard_form(walk);
  const Index n = walk.chain().dim();
  const Matrix& f = walk.F().matrix();
  const Index kp = sf.K_plus.cols();
  const Index km = sf.K_minus.cols();
  if (kp != sf.Kp_plus.cols() || km != sf.Kp_minus.cols() || kp != km)
    throw ConvergenceError("gapped parts of the blocks are not square");

  struct Data {
    Matrix f_fin, k, kprime, U_A, U_B, U_C, U_D, AA;
    CellChain chain;
    ChiralGrading grading;
  };
  const Matrix A = sf.Kp_plus.adjoint() * f * sf.K_plus;
  const Matrix B = sf.Kp_plus.adjoint() * f * sf.K_minus;
  const Matrix C = sf.Kp_minus.adjoint() * f * sf.K_plus;
  const Matrix D = sf.Kp_minus.adjoint() * f * sf.K_minus;
  for (const Matrix* x : {&A, &B, &C, &D}) {
    if (x->size() == 0) continue;
    if (linalg::singular_values(*x)(x->cols() - 1) <= kThresholds.gap)
      throw AdmissibilityError("block not invertible on the gapped part: cannot flatten");
  }
  auto d = std::make_shared<Data>(Data{Matrix(), hcat({&sf.K_plus, &sf.K_minus}, n),
                                       hcat({&sf.Kp_plus, &sf.Kp_minus}, n), linalg::polar_unitary(A),
                                       linalg::polar_unitary(B), linalg::polar_unitary(C), Matrix(), A.adjoint() * A,
                                       walk.chain(), walk.grading()});
  d->U_D = -d->U_C * d->U_A.adjoint() * d->U_B;
  d->f_fin = f - d->kprime * sf.F_K * d->k.adjoint();

  auto path = [d, kp](double t) {
    Matrix fk(2 * kp, 2 * kp);
    if (kp > 0) {
      const Matrix id = Matrix::Identity(kp, kp);
      const Matrix h = id * (t / 2) + d->AA * (1 - t);
      const Matrix m = d->U_B.adjoint() * d->U_A * h * d->U_A.adjoint() * d->U_B;
      fk.topLeftCorner(kp, kp) = d->U_A * linalg::hermitian_sqrt(h);
      fk.topRightCorner(kp, kp) = d->U_B * linalg::hermitian_sqrt(id - m);
      fk.bottomLeftCorner(kp, kp) = d->U_C * linalg::hermitian_sqrt(id - h);
      fk.bottomRightCorner(kp, kp) = d->U_D * linalg::hermitian_sqrt(m);
    }
    Matrix ft = d->f_fin + d->kprime * fk * d->k.adjoint();
    return HalfStepWalk(LatticeOperator(d->chain, std::move(ft), d->chain.band_cap()).truncated_to_band(kBandTol),
                        d->grading);
  };
  HalfStepWalk flat = path(1.0);
  return FlattenResult{path, std::move(flat)};
}

HalfStepWalk reference_halfstep(const CellChain& chain) {
  if (chain.cell_dim() != 2) throw GeometryError("reference operator needs two components per cell");
  const double r = 1.0 / std::sqrt(2.0);
  Matrix f0(2, 2);
  f0 << r, r, r, -r;
  return HalfStepWalk(LatticeOperator::local(chain, [&](int) { return f0; }), ChiralGrading::standard(2));
}

HalfStepWalk shift_content_halfstep(int a, int b, int c, const CellChain& chain) {
  if (chain.cell_dim() != 2) throw GeometryError("shift-content operator needs two components per cell");
  const CellChain sub = chain.with_cell_dim(1);
  const double r = 1.0 / std::sqrt(2.0);
  return HalfStepWalk(assemble(ChiralBlocks{make_shift(sub, 0, -a) * r, make_shift(sub, 0, -b) * r,
                                            make_shift(sub, 0, -c) * r, make_shift(sub, 0, a - b - c) * (-r)},
                               ChiralGrading::standard(2)),
                      ChiralGrading::standard(2));
}

LatticeOperator graded_shift(const CellChain& chain, const ChiralGrading& grading, int plus_power, int minus_power) {
  LatticeOperator s = LatticeOperator::identity(chain);
  for (int i = 0; i < grading.cell_dim(); ++i)
    s = make_shift(chain, i, grading.signs()[static_cast<std::size_t>(i)] > 0 ? plus_power : minus_power) * s;
  return s.with_bandwidth(std::max(std::abs(plus_power), std::abs(minus_power)));
}

Normalization normalize_to_reference(const HalfStepWalk& walk, const ReportOptions& options) {
  if (!standard_form(walk).finite_summands_empty())
    throw AdmissibilityError("F has finite kernel summands: apply standard_form first");
  const IndexReport before = full_report(walk, options);
  const int a = before.five_tuple.indR_A;
  const int b = before.five_tuple.indR_B;
  const int c = before.five_tuple.indR_C;
  const CellChain& chain = walk.chain();
  LatticeOperator left = graded_shift(chain, walk.grading(), a, c);
  LatticeOperator right = graded_shift(chain, walk.grading(), 0, b - a);
  HalfStepWalk normalized(left * walk.F() * right, walk.grading());
  IndexReport report = full_report(normalized, options);
  const int flow = flow_index(normalized.F(), options.cut);
  if (!(report.five_tuple == FiveTuple{}) || flow != 0)
    throw ConvergenceError("nonzero index left after shift normalization: index computation inconsistency");
  return Normalization{a, b, c, std::move(left), std::move(right), std::move(normalized), std::move(report), flow};
}

}  // namespace halfstep
