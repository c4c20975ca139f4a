#include "halfstep/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "halfstep/errors.hpp"
#include "halfstep/linalg.hpp"
#include "halfstep/parallel.hpp"

namespace halfstep {
namespace {

constexpr double kPi = std::numbers::pi;

int wrap_label(const CellChain& c, int x) {
  const int n = c.num_cells();
  return c.x_min() + ((x - c.x_min()) % n + n) % n;
}

AngleProfile constant(const SplitStepParams& p) {
  return [p](int) { return p; };
}

LatticeOperator local_rotation(const CellChain& chain, const std::function<double(int)>& angle) {
  return LatticeOperator::local(chain, [&](int x) { return rotation(angle(x)); });
}

HalfStepWalk from_blocks(const ChiralBlocks& b) {
  const ChiralGrading g = ChiralGrading::standard(2);
  return HalfStepWalk(assemble(b, g), g);
}

std::vector<Complex> sorted_spectrum(const LatticeOperator& W) {
  Eigen::ComplexEigenSolver<Matrix> es(W.matrix(), false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
  return ev;
}

}  // namespace

Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

LatticeOperator splitstep_operator(const AngleProfile& angles, const CellChain& chain) {
  if (chain.cell_dim() != 2) throw GeometryError("split-step walk needs two components per cell");
  const LatticeOperator r2 = local_rotation(chain, [&](int x) { return angles(x).theta2 / 2 - kPi / 4; });
  const LatticeOperator r1 = local_rotation(chain, [&](int x) { return angles(x).theta1 / 2 + kPi / 4; });
  return r2 * make_shift(chain, 0, 1) * r1;
}

HalfStepWalk splitstep_halfstep(const SplitStepParams& p, const CellChain& chain) {
  return splitstep_halfstep(constant(p), chain);
}

HalfStepWalk splitstep_halfstep(const AngleProfile& angles, const CellChain& chain) {
  return HalfStepWalk(splitstep_operator(angles, chain), ChiralGrading::standard(2));
}

LatticeOperator splitstep_halfstep_sigma1(const AngleProfile& angles, const CellChain& chain) {
  const LatticeOperator r2 = local_rotation(chain, [&](int x) { return angles(x).theta2 / 2; });
  const LatticeOperator r1 = local_rotation(chain, [&](int x) { return angles(x).theta1 / 2; });
  return r2 * make_shift(chain, 0, 1) * r1;
}

LatticeOperator splitstep_walk_sigma1(const AngleProfile& angles, const CellChain& chain) {
  const LatticeOperator half1 = local_rotation(chain, [&](int x) { return angles(x).theta1 / 2; });
  const LatticeOperator full2 = local_rotation(chain, [&](int x) { return angles(x).theta2; });
  return half1 * make_shift(chain, 1, -1) * full2 * make_shift(chain, 0, 1) * half1;
}

LatticeOperator chiral_basis_change(const CellChain& chain) {
  return local_rotation(chain, [](int) { return -kPi / 4; });
}

std::string_view patch_name(Patch p) {
  switch (p) {
    case Patch::I: return "I";
    case Patch::II: return "II";
    case Patch::III: return "III";
    case Patch::IV: return "IV";
  }
  return "?";
}

SplitStepParams patch_point(Patch p) {
  switch (p) {
    case Patch::I: return {0.0, kPi / 2};
    case Patch::II: return {0.0, -kPi / 2};
    case Patch::III: return {-kPi / 2, 0.0};
    case Patch::IV: return {kPi / 2, 0.0};
  }
  return {};
}

PhasePoint phase_point(const SplitStepParams& p, const CellChain& chain) {
  const HalfStepWalk walk = splitstep_halfstep(p, chain);
  PhasePoint pt;
  pt.theta1 = p.theta1;
  pt.theta2 = p.theta2;
  pt.gap = block_gaps(walk, true).min();
  pt.gapped = pt.gap > kThresholds.gap;
  if (!pt.gapped) return pt;
  const ChiralBlocks& b = walk.blocks();
  pt.indR_A = winding_index(symbol_of(b.A));
  pt.indR_B = winding_index(symbol_of(b.B));
  pt.indR_C = winding_index(symbol_of(b.C));
  pt.siR_W = pt.indR_A - pt.indR_B;
  pt.siR_Wp = pt.indR_C - pt.indR_A;
  pt.indR_F = flow_index(walk.F(), 0);
  return pt;
}

std::vector<double> offset_grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = -kPi + (j + 0.5) * 2 * kPi / n;
  return g;
}

std::vector<PhasePoint> harlequin(const std::vector<SplitStepParams>& points, const CellChain& chain, int workers) {
  std::vector<PhasePoint> out(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) { out[i] = phase_point(points[i], chain); });
  return out;
}

std::vector<PhasePoint> harlequin_grid(int n1, int n2, const CellChain& chain, int workers) {
  std::vector<SplitStepParams> pts;
  for (double t1 : offset_grid(n1))
    for (double t2 : offset_grid(n2)) pts.push_back({t1, t2});
  return harlequin(pts, chain, workers);
}

std::optional<Patch> patch_of(const PhasePoint& p) {
  if (!p.gapped) return std::nullopt;
  const std::pair<int, int> key{p.siR_W, p.siR_Wp};
  if (key == std::pair{0, 1}) return Patch::I;
  if (key == std::pair{0, -1}) return Patch::II;
  if (key == std::pair{-1, 0}) return Patch::III;
  if (key == std::pair{1, 0}) return Patch::IV;
  return std::nullopt;
}

AngleProfile crossover_profile(const CrossoverSpec& spec, const CellChain& chain) {
  if (!chain.is_ring()) throw GeometryError("crossovers are built on a ring");
  const int n = chain.num_cells();
  if (spec.transition_width > 0 && n < 8 * spec.transition_width)
    throw GeometryError("ring circumference below eight transition widths");
  return [spec, n](int x) {
    int u = ((x - spec.interface_cell) % n + n) % n;
    if (u >= n / 2) u -= n;
    double f;
    if (spec.transition_width == 0) {
      f = u < 0 ? 0.0 : 1.0;
    } else {
      const double w = spec.transition_width;
      f = 0.5 * (std::tanh((u + 0.5) / w) + std::tanh((n / 2.0 - u - 0.5) / w));
    }
    return SplitStepParams{spec.left.theta1 + f * (spec.right.theta1 - spec.left.theta1),
                           spec.left.theta2 + f * (spec.right.theta2 - spec.left.theta2)};
  };
}

HalfStepWalk crossover_walk(const CrossoverSpec& spec, const CellChain& chain) {
  return splitstep_halfstep(crossover_profile(spec, chain), chain);
}

CrossoverReport crossover(const CrossoverSpec& spec, const CellChain& chain) {
  const HalfStepWalk walk = crossover_walk(spec, chain);
  CrossoverReport rep;
  rep.spec = spec;
  rep.left_bulk = phase_point(spec.left, chain);
  rep.right_bulk = phase_point(spec.right, chain);
  if (!rep.left_bulk.gapped || !rep.right_bulk.gapped) throw AdmissibilityError("crossover bulk is not gapped");

  const int n = chain.num_cells();
  const int centers[2] = {wrap_label(chain, spec.interface_cell), wrap_label(chain, spec.interface_cell + n / 2)};
  const Eigen::VectorXd g = walk.grading().diagonal(chain);
  const LocalizationBand band{0.1, 0.9};

  for (int i = 0; i < 2; ++i) {
    InterfaceReport ir;
    ir.cell = centers[i];
    ir.wrap = i == 1;
    ir.left = i == 0 ? spec.left : spec.right;
    ir.right = i == 0 ? spec.right : spec.left;
    rep.interfaces.push_back(ir);
  }

  const std::pair<const char*, const LatticeOperator*> frames[2] = {{"W", &walk.W()}, {"W'", &walk.W_prime()}};
  for (const auto& [frame, op] : frames) {
    for (int lambda : {1, -1}) {
      const Matrix q = eigenspace(*op, Complex(lambda, 0));
      Index assigned = 0;
      for (int i = 0; i < 2; ++i) {
        const Region region = quarter_region(chain, centers[i]);
        const linalg::Localized loc = linalg::diagonalize_weight(q, region_weights(chain, region));
        std::vector<Index> keep;
        for (Index j = 0; j < loc.expectation.size(); ++j) {
          const double e = loc.expectation(j);
          if (e > band.lo && e < band.hi) throw ConvergenceError("edge state delocalized across interfaces: ring too small");
          if (e >= band.hi) keep.push_back(j);
        }
        Matrix sub(q.rows(), static_cast<Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) sub.col(static_cast<Index>(j)) = loc.basis.col(keep[j]);
        assigned += sub.cols();
        const linalg::Localized chir = linalg::diagonalize_weight(sub, g);
        int trace = 0;
        for (Index j = 0; j < chir.expectation.size(); ++j) {
          const int c = chir.expectation(j) > 0 ? 1 : -1;
          trace += c;
          const Vector v = chir.basis.col(j);
          const double mass = (v.cwiseAbs2().array() * region_weights(chain, region).array()).sum();
          rep.states.push_back(EdgeState{frame, lambda, centers[i], c, mass});
        }
        FrameCounts& fc = std::string(frame) == "W" ? rep.interfaces[static_cast<std::size_t>(i)].W
                                                    : rep.interfaces[static_cast<std::size_t>(i)].Wp;
        if (lambda == 1) {
          fc.n_plus = static_cast<int>(sub.cols());
          fc.si_plus = trace;
        } else {
          fc.n_minus = static_cast<int>(sub.cols());
          fc.si_minus = trace;
        }
      }
      if (assigned != q.cols()) throw ConvergenceError("edge state not attributable to an interface: ring too small");
    }
  }

  for (auto& ir : rep.interfaces) {
    const PhasePoint& L = ir.wrap ? rep.right_bulk : rep.left_bulk;
    const PhasePoint& R = ir.wrap ? rep.left_bulk : rep.right_bulk;
    ir.predicted_2si_plus = R.siR_W + R.siR_Wp - L.siR_W - L.siR_Wp;
    ir.predicted_2si_minus = (R.siR_W - R.siR_Wp) - (L.siR_W - L.siR_Wp);
    ir.formula_holds = 2 * ir.W.si_plus == ir.predicted_2si_plus && 2 * ir.W.si_minus == ir.predicted_2si_minus;
    ir.index_condition = ir.Wp.si_plus == ir.W.si_plus && ir.Wp.si_minus == -ir.W.si_minus;
  }
  rep.spectrum_W = sorted_spectrum(walk.W());
  rep.spectrum_Wp = sorted_spectrum(walk.W_prime());
  return rep;
}

std::string_view named_halfstep_name(NamedHalfStep n) {
  switch (n) {
    case NamedHalfStep::F1: return "F1";
    case NamedHalfStep::F2: return "F2";
    case NamedHalfStep::F3: return "F3";
  }
  return "?";
}

HalfStepWalk named_halfstep(NamedHalfStep n, const CellChain& chain) {
  if (chain.cell_dim() != 2) throw GeometryError("named half-steps need two components per cell");
  const CellChain sub = chain.with_cell_dim(1);
  const double r = 1.0 / std::sqrt(2.0);
  const LatticeOperator s = make_shift(sub, 0, 1) * r;
  const LatticeOperator one = LatticeOperator::identity(sub) * r;
  switch (n) {
    case NamedHalfStep::F1: return from_blocks({s, s * -1.0, one, one});
    case NamedHalfStep::F2: return from_blocks({one, one, s * -1.0, s});
    case NamedHalfStep::F3: return from_blocks({s * -1.0, s * -1.0, one, one * -1.0});
  }
  throw GeometryError("unknown named half-step");
}

HalfStepWalk phase_bridge(double t, const CellChain& chain) {
  const CellChain sub = chain.with_cell_dim(1);
  const double r = 1.0 / std::sqrt(2.0);
  const LatticeOperator s = make_shift(sub, 0, 1) * r;
  const LatticeOperator one = LatticeOperator::identity(sub) * r;
  const Complex phase = std::polar(1.0, kPi * t);
  return from_blocks({s * phase, s * -1.0, one, one * std::conj(phase)});
}

PathSpec linear_renormalized_path(const HalfStepWalk& a, const HalfStepWalk& b, int samples) {
  const LatticeOperator fa = a.F();
  const LatticeOperator fb = b.F();
  const ChiralGrading g = a.grading();
  auto gen = [fa, fb, g](double t) {
    const Matrix mix = fa.matrix() * (1 - t) + fb.matrix() * t;
    return HalfStepWalk(LatticeOperator(fa.chain(), linalg::polar_unitary(mix), fa.chain().band_cap()), g);
  };
  return sample_path(gen, samples, "linear-renormalized");
}

BridgeOutcome bridge_path(NamedHalfStep from, NamedHalfStep to, const CellChain& chain, int samples) {
  BridgeOutcome out;
  out.from = full_report(named_halfstep(from, chain)).five_tuple;
  out.to = full_report(named_halfstep(to, chain)).five_tuple;
  out.differing = differing_indices(out.from, out.to);
  if (!out.differing.empty()) {
    out.kind = BridgeOutcome::Kind::NoBridge;
    out.note = "index tuples differ: no admissible path exists";
    return out;
  }
  if (from == to) {
    out.kind = BridgeOutcome::Kind::Path;
    out.path = sample_path([from, chain](double) { return named_halfstep(from, chain); }, samples, "constant");
    return out;
  }
  const bool forward = from == NamedHalfStep::F1 && to == NamedHalfStep::F3;
  const bool backward = from == NamedHalfStep::F3 && to == NamedHalfStep::F1;
  if (forward || backward) {
    out.kind = BridgeOutcome::Kind::Path;
    out.path = sample_path([chain, backward](double t) { return phase_bridge(backward ? 1 - t : t, chain); }, samples,
                           "phase");
    return out;
  }
  out.kind = BridgeOutcome::Kind::NonConstructive;
  out.note = "equal indices: a path exists by completeness, no constructive path implemented";
  return out;
}

namespace {

struct NongentleOps {
  CellChain chain;
  LatticeOperator F;
  LatticeOperator F_tilde;
};

NongentleOps nongentle_ops(int L) {
  if (L < 8) throw GeometryError("non-gentle demo needs half length at least 8");
  const CellChain chain(-L, L - 1, 2, Topology::Ring);
  const LatticeOperator u = chiral_basis_change(chain);
  const AngleProfile flat = [](int) { return SplitStepParams{0.0, kPi / 2}; };
  Matrix sigma1(2, 2);
  sigma1 << 0, 1, 1, 0;
  const LatticeOperator pi = LatticeOperator::local(
      chain, [&](int x) { return x < 0 ? Matrix(Matrix::Identity(2, 2)) : sigma1; });
  const LatticeOperator s_tilde = pi * make_shift(chain, 0, 1) * pi;
  const LatticeOperator f_sigma = splitstep_halfstep_sigma1(flat, chain);
  const LatticeOperator ft_sigma = local_rotation(chain, [](int) { return kPi / 4; }) * s_tilde;
  return {chain, u * f_sigma * u.adjoint(), u * ft_sigma * u.adjoint()};
}

}  // namespace

NongentleResult nongentle_perturbation(int L) {
  const NongentleOps ops = nongentle_ops(L);
  const CellChain& c = ops.chain;
  const ChiralGrading g = ChiralGrading::standard(2);
  HalfStepWalk original(ops.F, g);
  HalfStepWalk perturbed(ops.F_tilde, g);

  const Matrix dw = perturbed.W().matrix() - original.W().matrix();
  auto near_defect = [&](int x) {
    return (x >= -2 && x <= 2) || c.distance(x, c.x_min()) <= 2 || c.distance(x, c.x_max()) <= 2;
  };
  double outside = 0.0;
  for (Index j = 0; j < dw.cols(); ++j)
    for (Index i = 0; i < dw.rows(); ++i)
      if (!near_defect(c.cell_of(i)) || !near_defect(c.cell_of(j))) outside = std::max(outside, std::abs(dw(i, j)));

  const Index start = c.index(L / 2, 0);
  const Index len = c.index(L - 1, 1) - start + 1;
  const Matrix df = (ops.F_tilde.matrix() - ops.F.matrix()).block(start, start, len, len);

  const Region region = quarter_region(c, 0);
  NongentleResult r{L,
                    original,
                    perturbed,
                    outside,
                    operator_norm(df),
                    symmetry_indices(original.W(), g, region),
                    symmetry_indices(perturbed.W(), g, region)};
  return r;
}

LatticeOperator nongentle_single_defect(int L) {
  const NongentleOps ops = nongentle_ops(L);
  const CellChain& c = ops.chain;
  const ChiralGrading g = ChiralGrading::standard(2);
  const LatticeOperator w = HalfStepWalk(ops.F, g).W();
  const LatticeOperator wt = HalfStepWalk(ops.F_tilde, g).W();
  Matrix m = w.matrix();
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(c.cell_of(i)) <= 4 && std::abs(c.cell_of(j)) <= 4) m(i, j) = wt.matrix()(i, j);
  return LatticeOperator(c, std::move(m), w.bandwidth());
}

}  // namespace halfstep
