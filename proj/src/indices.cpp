#include "halfstep/indices.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "halfstep/errors.hpp"
#include "halfstep/linalg.hpp"
#include "halfstep/simd.hpp"

namespace halfstep {
namespace {

constexpr const char* kBlockNames[4] = {"A", "B", "C", "D"};

int wrap_label(const CellChain& c, int x) {
  if (!c.is_ring()) return x;
  const int n = c.num_cells();
  return c.x_min() + ((x - c.x_min()) % n + n) % n;
}

struct Counted {
  int count = 0;
  std::vector<double> masses;
};

Counted count_localized(const Matrix& q, const Eigen::VectorXd& weights, LocalizationBand band,
                        const char* what) {
  Counted out;
  linalg::Localized loc = linalg::diagonalize_weight(q, weights);
  for (Index i = 0; i < loc.expectation.size(); ++i) {
    const double e = loc.expectation(i);
    out.masses.push_back(e);
    if (e >= band.lo && e <= band.hi) {
      std::ostringstream msg;
      msg << "ambiguous localization of a " << what << " direction (mass " << e << "): increase chain length";
      throw ConvergenceError(msg.str());
    }
    if (e > band.hi) ++out.count;
  }
  return out;
}

int round_checked(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-6) throw ConvergenceError(std::string(what) + " is not close to an integer");
  return static_cast<int>(r);
}

}  // namespace

Eigen::VectorXd region_weights(const CellChain& chain, const Region& region) {
  Eigen::VectorXd w(chain.dim());
  for (Index r = 0; r < chain.dim(); ++r) {
    const int x = chain.cell_of(r);
    w(r) = chain.distance(x, region.center) < region.radius ? 1.0 : 0.0;
  }
  return w;
}

Region quarter_region(const CellChain& chain, int center) {
  return Region{center, std::max(1, chain.num_cells() / 4)};
}

KernelCount localized_kernel(const LatticeOperator& X, const Region& region, LocalizationBand band) {
  const linalg::NullSpace ns = linalg::near_null(X.matrix(), kThresholds.ker, true);
  const Eigen::VectorXd w = region_weights(X.chain(), region);
  KernelCount kc;
  Counted ker = count_localized(ns.right, w, band, "kernel");
  Counted coker = count_localized(ns.left, w, band, "cokernel");
  kc.dim_ker = ker.count;
  kc.dim_coker = coker.count;
  kc.singular_values_near_zero = ns.right_values;
  kc.localization_masses = ker.masses;
  kc.localization_masses.insert(kc.localization_masses.end(), coker.masses.begin(), coker.masses.end());
  return kc;
}

KernelCount fredholm_kernel(const LatticeOperator& X, int origin) {
  return localized_kernel(X, quarter_region(X.chain(), origin));
}

int fredholm_index(const LatticeOperator& X, int origin) { return fredholm_kernel(X, origin).index(); }

KernelCount half_chain_kernel(const LatticeOperator& X, int cut) {
  const CellChain& c = X.chain();
  if (!c.is_ring()) {
    const int b = X.bandwidth();
    if (cut - c.x_min() < 2 * b || c.x_max() - cut + 1 < 2 * b)
      throw GeometryError("cut closer than twice the bandwidth to a chain end");
  }
  const LatticeOperator pxp = compress(X, {cut, Side::GeqA});
  return localized_kernel(pxp, Region{cut, std::max(1, c.num_cells() / 4)});
}

int half_chain_index(const LatticeOperator& X, int cut) { return half_chain_kernel(X, cut).index(); }

double essential_gap(const LatticeOperator& X) {
  const Eigen::VectorXd s = linalg::singular_values(X.matrix());
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  double g = s(0);
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) >= kThresholds.ker * s(0)) g = s(i);
  return g;
}

FlowResult flow_sum(const LatticeOperator& F, int cut) {
  const CellChain& c = F.chain();
  const int n = c.num_cells();
  const int w = std::clamp(F.bandwidth(), 1, std::max(1, n / 4));
  if (!c.is_ring() && (cut - w < c.x_min() || cut + w - 1 > c.x_max()))
    throw GeometryError("flow window leaves the chain");
  if (c.is_ring() && n < 4 * std::min(F.bandwidth(), n / 4))
    throw GeometryError("ring circumference below four bandwidths");
  const int d = c.cell_dim();
  const Matrix& m = F.matrix();
  auto block_mass = [&](int row_cell, int col_cell) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
      const Complex* col = m.data() + c.index(col_cell, j) * m.rows() + c.index(row_cell, 0);
      acc += simd::sum_abs2(col, static_cast<std::size_t>(d));
    }
    return acc;
  };
  double raw = 0.0;
  for (int i = 1; i <= w; ++i) {
    const int x = wrap_label(c, cut - i);
    for (int j = 0; j < w; ++j) {
      const int y = wrap_label(c, cut + j);
      raw += block_mass(y, x) - block_mass(x, y);
    }
  }
  const double r = std::round(raw);
  return FlowResult{-static_cast<int>(r), raw, std::abs(raw - r), w};
}

int flow_index(const LatticeOperator& F, int cut) {
  const FlowResult f = flow_sum(F, cut);
  if (f.residual > kThresholds.flow_error) {
    std::ostringstream msg;
    msg << "flow sum " << f.raw << " is not an integer: non-unitary or non-banded input";
    throw AdmissibilityError(msg.str());
  }
  return f.index;
}

int polar_flow_index(const LatticeOperator& X, int cut) {
  if (linalg::singular_values(X.matrix()).minCoeff() <= kThresholds.gap)
    throw AdmissibilityError("polar flow needs an invertible operator");
  // The polar part is only quasi-local, so the truncated window sum is not exact.
  const LatticeOperator u(X.chain(), linalg::polar_unitary(X.matrix()), X.chain().band_cap());
  const FlowResult f = flow_sum(u, cut);
  if (f.residual > 0.25) throw ConvergenceError("polar flow sum far from an integer: ring too small for this gap");
  return f.index;
}

bool is_translation_invariant(const LatticeOperator& X, double tol) {
  if (!X.chain().is_ring()) return false;
  const LatticeOperator t = make_cell_shift(X.chain(), 1);
  const Matrix moved = t.matrix() * X.matrix() * t.matrix().adjoint();
  return simd::max_abs_diff(moved.data(), X.matrix().data(), static_cast<std::size_t>(moved.size())) <= tol;
}

Symbol symbol_of(const LatticeOperator& X) {
  const CellChain& c = X.chain();
  if (!c.is_ring()) throw GeometryError("symbols need a ring");
  const int n = c.num_cells();
  const int x0 = c.x_min();
  std::vector<std::pair<int, Matrix>> terms;
  for (int y = c.x_min(); y <= c.x_max(); ++y) {
    int off = y - x0;
    if (off > n / 2) off -= n;
    if (std::abs(off) > X.bandwidth()) continue;
    terms.emplace_back(off, X.block(y, x0));
  }
  const int d = c.cell_dim();
  return [terms = std::move(terms), d](double k) {
    Matrix s = Matrix::Zero(d, d);
    for (const auto& [off, b] : terms) s += b * std::polar(1.0, off * k);
    return s;
  };
}

WindingResult winding(const Symbol& symbol, int initial_samples) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr int max_samples = 1 << 16;
  std::optional<int> previous;
  double last_jump = 0.0;
  WindingResult result{0, 0, 0, 0.0};
  for (int n = std::max(8, initial_samples); n <= max_samples; n *= 2) {
    std::vector<Complex> dets(static_cast<std::size_t>(n));
    double min_abs = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      dets[static_cast<std::size_t>(j)] = symbol(two_pi * j / n).determinant();
      min_abs = std::min(min_abs, std::abs(dets[static_cast<std::size_t>(j)]));
    }
    if (min_abs <= kThresholds.gap) throw AdmissibilityError("symbol determinant vanishes: gap closed");
    double total = 0.0;
    last_jump = 0.0;
    for (int j = 0; j < n; ++j) {
      const double step = std::arg(dets[static_cast<std::size_t>((j + 1) % n)] / dets[static_cast<std::size_t>(j)]);
      total += step;
      last_jump = std::max(last_jump, std::abs(step));
    }
    const int w = static_cast<int>(std::lround(total / two_pi));
    result = WindingResult{w, -w, n, min_abs};
    if (last_jump < std::numbers::pi / 4 && previous && *previous == w) return result;
    previous = w;
  }
  if (last_jump > std::numbers::pi) throw AdmissibilityError("gap closure on sampling grid");
  return result;
}

int winding_index(const Symbol& symbol, int initial_samples) { return winding(symbol, initial_samples).index; }

double symbol_gap(const Symbol& symbol, int samples) {
  double g = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const Matrix s = symbol(2.0 * std::numbers::pi * j / samples);
    Eigen::JacobiSVD<Matrix> svd(s);
    g = std::min(g, svd.singularValues()(svd.singularValues().size() - 1));
  }
  return g;
}

Matrix eigenspace(const LatticeOperator& W, Complex lambda) {
  if (std::abs(std::abs(lambda.real()) - 1.0) > 0.0 || lambda.imag() != 0.0)
    throw GeometryError("eigenspace is only resolved at +1 and -1");
  // For unitary W the Hermitian part (W - W*)/2i has eigenvalue sin θ, so the distance
  // to ±1 is resolved to machine precision; the cosine sign separates +1 from -1.
  const Matrix& w = W.matrix();
  const Matrix k = (w - w.adjoint()) * Complex(0, -0.5);
  Eigen::SelfAdjointEigenSolver<Matrix> es((k + k.adjoint()) * 0.5);
  const Eigen::VectorXd& mu = es.eigenvalues();
  std::vector<Index> near;
  for (Index i = 0; i < mu.size(); ++i)
    if (std::abs(mu(i)) <= 10 * kThresholds.eig) near.push_back(i);
  Matrix q(w.rows(), static_cast<Index>(near.size()));
  for (std::size_t i = 0; i < near.size(); ++i) q.col(static_cast<Index>(i)) = es.eigenvectors().col(near[i]);
  if (q.cols() == 0) return q;
  const Matrix re = q.adjoint() * ((w + w.adjoint()) * 0.5) * q;
  Eigen::SelfAdjointEigenSolver<Matrix> rs((re + re.adjoint()) * 0.5);
  const Matrix basis = q * rs.eigenvectors();
  const double sign = lambda.real();
  std::vector<Index> keep;
  for (Index i = 0; i < rs.eigenvalues().size(); ++i) {
    if (rs.eigenvalues()(i) * sign <= 0.0) continue;
    const Vector v = basis.col(i);
    const double dist = (w * v - lambda * v).norm();
    if (dist >= kThresholds.eig) {
      std::ostringstream msg;
      msg << "ambiguous gap: eigenvalue at distance " << dist << " from " << lambda;
      throw ConvergenceError(msg.str());
    }
    keep.push_back(i);
  }
  Matrix out(w.rows(), static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Index>(i)) = basis.col(keep[i]);
  return out;
}

SymmetryIndices symmetry_indices(const LatticeOperator& W, const ChiralGrading& grading,
                                 const std::optional<Region>& region, LocalizationBand band) {
  const Eigen::VectorXd g = grading.diagonal(W.chain());
  SymmetryIndices out;
  for (int sign : {1, -1}) {
    Matrix q = eigenspace(W, Complex(sign, 0));
    if (region) {
      linalg::Localized loc = linalg::diagonalize_weight(q, region_weights(W.chain(), *region));
      std::vector<Index> keep;
      for (Index i = 0; i < loc.expectation.size(); ++i) {
        const double e = loc.expectation(i);
        if (e >= band.lo && e <= band.hi) throw ConvergenceError("eigenvector delocalized across regions: ring too small");
        if (e > band.hi) keep.push_back(i);
      }
      Matrix kept(q.rows(), static_cast<Index>(keep.size()));
      for (std::size_t i = 0; i < keep.size(); ++i) kept.col(static_cast<Index>(i)) = loc.basis.col(keep[i]);
      q = kept;
    }
    const double tr = (q.adjoint() * g.cast<Complex>().asDiagonal() * q).trace().real();
    const int si = round_checked(tr, "chirality trace");
    if (sign == 1) {
      out.plus = si;
      out.n_plus = static_cast<int>(q.cols());
    } else {
      out.minus = si;
      out.n_minus = static_cast<int>(q.cols());
    }
  }
  return out;
}

DerivedIndices derive(const FiveTuple& t) {
  DerivedIndices d;
  const int ind_C = -t.ind_B;
  d.si = t.ind_A - t.ind_B;
  d.siR = t.indR_A - t.indR_B;
  d.si_prime = ind_C - t.ind_A;
  d.siR_prime = t.indR_C - t.indR_A;
  d.si_plus = ind_C;
  d.si_minus = t.ind_A;
  d.indR_F = t.indR_B + t.indR_C;
  d.ind_F = t.ind_B + ind_C;
  return d;
}

bool IndexReport::all_hold() const {
  for (const auto& r : consistency)
    if (!r.holds) return false;
  return true;
}

double BlockGaps::min() const { return *std::min_element(values.begin(), values.end()); }

BlockGaps block_gaps(const HalfStepWalk& walk, bool translation_invariant) {
  const ChiralBlocks& b = walk.blocks();
  const LatticeOperator* blocks[4] = {&b.A, &b.B, &b.C, &b.D};
  BlockGaps g{};
  for (int i = 0; i < 4; ++i)
    g.values[static_cast<std::size_t>(i)] =
        translation_invariant ? symbol_gap(symbol_of(*blocks[i])) : essential_gap(*blocks[i]);
  return g;
}

IndexReport full_report(const HalfStepWalk& walk, const ReportOptions& options) {
  const CellChain& chain = walk.chain();
  const bool ti = chain.is_ring() && is_translation_invariant(walk.F());
  Route route = options.route;
  if (route == Route::Auto) route = ti ? Route::Winding : Route::Kernel;
  if (route == Route::Winding && !ti) throw GeometryError("winding route needs a translation-invariant F on a ring");
  const bool use_winding = route == Route::Winding;

  const BlockGaps gaps = block_gaps(walk, use_winding);
  for (int i = 0; i < 4; ++i) {
    if (gaps.values[static_cast<std::size_t>(i)] <= kThresholds.gap) {
      std::ostringstream msg;
      msg << "block " << kBlockNames[i] << " is not Fredholm: essential gap "
          << gaps.values[static_cast<std::size_t>(i)];
      throw AdmissibilityError(msg.str());
    }
  }

  const ChiralBlocks& b = walk.blocks();
  const LatticeOperator* blocks[4] = {&b.A, &b.B, &b.C, &b.D};
  std::array<int, 4> ind{};
  std::array<int, 4> indR{};
  for (int i = 0; i < 4; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (use_winding) {
      ind[k] = 0;
      indR[k] = winding_index(symbol_of(*blocks[i]));
    } else {
      ind[k] = fredholm_index(*blocks[i], options.origin);
      indR[k] = half_chain_index(*blocks[i], options.cut);
    }
  }
  const int ind_F = use_winding ? 0 : fredholm_index(walk.F(), options.origin);
  const int indR_F_flow = flow_index(walk.F(), options.cut);
  const int indR_F_alt =
      use_winding ? winding_index(symbol_of(walk.F())) : half_chain_index(walk.F(), options.cut);

  IndexReport r{FiveTuple{ind[0], ind[1], indR[0], indR[1], indR[2]}, {}, {}, chain,
                use_winding ? "winding" : "kernel"};
  r.derived = derive(r.five_tuple);
  r.derived.indR_F = indR_F_flow;
  r.derived.ind_F = ind_F;

  auto add = [&r](std::string name, bool holds) { r.consistency.push_back({std::move(name), holds}); };
  add("ind_A + ind_D = ind_B + ind_C", ind[0] + ind[3] == ind[1] + ind[2]);
  add("indR_A + indR_D = indR_B + indR_C", indR[0] + indR[3] == indR[1] + indR[2]);
  add("ind_C = -ind_B", ind[2] == -ind[1]);
  add("ind_F = ind_B + ind_C", ind_F == ind[1] + ind[2]);
  add("indR_F = indR_B + indR_C", indR_F_flow == indR[1] + indR[2]);
  add(std::string("indR_F flow = indR_F ") + (use_winding ? "winding" : "kernel"), indR_F_flow == indR_F_alt);
  add("si_plus = (si + si')/2", 2 * ind[2] == (ind[0] - ind[1]) + (ind[2] - ind[0]));

  if (options.eigenspace_checks && chain.is_ring()) {
    const Region region = quarter_region(chain, options.origin);
    const std::optional<Region> reg = use_winding ? std::nullopt : std::optional<Region>(region);
    const SymmetryIndices sw = symmetry_indices(walk.W(), walk.grading(), reg);
    const SymmetryIndices swp = symmetry_indices(walk.W_prime(), walk.grading(), reg);
    add("si_plus(W) = ind_C", sw.plus == ind[2]);
    add("si_minus(W) = ind_A", sw.minus == ind[0]);
    add("si_plus(W') = si_plus(W)", swp.plus == sw.plus);
    add("si_minus(W') = -si_minus(W)", swp.minus == -sw.minus);
  }
  return r;
}

IndexReport certified_report(const std::function<HalfStepWalk(const CellChain&)>& build, const CellChain& chain,
                             const ReportOptions& options) {
  IndexReport first = full_report(build(chain), options);
  const IndexReport second = full_report(build(chain.doubled()), options);
  if (!(first.five_tuple == second.five_tuple) || !(first.derived == second.derived))
    throw ConvergenceError("index changed under chain doubling: truncation too small");
  for (std::size_t i = 0; i < first.consistency.size() && i < second.consistency.size(); ++i)
    first.consistency[i].holds = first.consistency[i].holds && second.consistency[i].holds;
  return first;
}

}  // namespace halfstep
