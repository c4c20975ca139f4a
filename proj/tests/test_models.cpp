#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "halfstep/errors.hpp"
#include "halfstep/indices.hpp"
#include "halfstep/models.hpp"

using namespace halfstep;

namespace {

constexpr double kPi = std::numbers::pi;
const CellChain kRing32 = CellChain::centered_ring(32, 2);

// Trace of the Bloch matrix of R(θ₁/2) S↓ R(θ₂) S↑ R(θ₁/2) where S↑ (S↓) moves the upper (lower)
// component by one cell in opposite directions: 2 cos θ₁ cos θ₂ cos k − 2 sin θ₁ sin θ₂.
double trace_oracle(double t1, double t2, double k) {
  return 2 * std::cos(t1) * std::cos(t2) * std::cos(k) - 2 * std::sin(t1) * std::sin(t2);
}

FiveTuple tuple_of(const HalfStepWalk& w) { return full_report(w).five_tuple; }

}  // namespace

TEST(SplitStep, BlochTraceMatchesDispersion) {
  for (const auto& p : {SplitStepParams{0.3, 1.2}, SplitStepParams{-2.1, 0.7}, SplitStepParams{1.0, -0.4}}) {
    const HalfStepWalk w = splitstep_halfstep(p, kRing32);
    const Symbol s = symbol_of(w.W());
    for (double k : {0.0, 0.7, 1.9, kPi}) EXPECT_NEAR(s(k).trace().real(), trace_oracle(p.theta1, p.theta2, k), 1e-12);
  }
}

TEST(SplitStep, ChiralBasisMatchesSigma1Basis) {
  const AngleProfile a = [](int x) { return SplitStepParams{0.2 + 0.01 * x, -0.9}; };
  const LatticeOperator u = chiral_basis_change(kRing32);
  const LatticeOperator w_sigma = splitstep_walk_sigma1(a, kRing32);
  const HalfStepWalk f = splitstep_halfstep(a, kRing32);
  EXPECT_LT((u * w_sigma * u.adjoint() - f.W()).matrix().norm(), 1e-12);
  EXPECT_LT((u * splitstep_halfstep_sigma1(a, kRing32) * u.adjoint() - f.F()).matrix().norm(), 1e-12);
}

TEST(SplitStep, Sigma1HalfStepSquaresToWalk) {
  const AngleProfile a = [](int) { return SplitStepParams{0.5, 1.1}; };
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const LatticeOperator g = LatticeOperator::local(kRing32, [&](int) { return sx; });
  const LatticeOperator f = splitstep_halfstep_sigma1(a, kRing32);
  EXPECT_LT((g * f.adjoint() * g * f - splitstep_walk_sigma1(a, kRing32)).matrix().norm(), 1e-12);
}

TEST(SplitStep, RejectsOddCellDimension) {
  EXPECT_THROW(splitstep_operator([](int) { return SplitStepParams{}; }, CellChain::centered_ring(8, 1)),
               GeometryError);
}

TEST(Phase, PatchPointsClassifyToTheirPatch) {
  for (Patch p : {Patch::I, Patch::II, Patch::III, Patch::IV}) {
    const PhasePoint pt = phase_point(patch_point(p), kRing32);
    ASSERT_TRUE(pt.gapped);
    EXPECT_EQ(patch_of(pt), p) << patch_name(p);
    EXPECT_EQ(pt.indR_F, -1);
  }
}

TEST(Phase, GapClosesOnDiagonals) {
  for (const auto& p : {SplitStepParams{0.7, 0.7}, SplitStepParams{0.7, -0.7}, SplitStepParams{0, 0}}) {
    const PhasePoint pt = phase_point(p, kRing32);
    EXPECT_FALSE(pt.gapped) << p.theta1 << "," << p.theta2;
    EXPECT_FALSE(patch_of(pt).has_value());
  }
}

TEST(Phase, OffsetGridSkipsClosures) {
  const std::vector<double> g = offset_grid(33);
  ASSERT_EQ(g.size(), 33u);
  EXPECT_NEAR(g.front(), -kPi + kPi / 33, 1e-15);
  EXPECT_NEAR(g.back(), kPi - kPi / 33, 1e-15);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 2 * kPi / 33, 1e-14);
}

TEST(Phase, GridIsRowMajorOverTheta1) {
  const CellChain ring = CellChain::centered_ring(16, 2);
  const std::vector<PhasePoint> pts = harlequin_grid(3, 4, ring, 2);
  const std::vector<double> g1 = offset_grid(3), g2 = offset_grid(4);
  ASSERT_EQ(pts.size(), 12u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_DOUBLE_EQ(pts[i].theta1, g1[i / 4]);
    EXPECT_DOUBLE_EQ(pts[i].theta2, g2[i % 4]);
  }
}

// Property: indR_F = indR_B + indR_C = -1 at every gapped point.
TEST(Phase, RightIndexOfFIsConstant) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  int gapped = 0;
  for (int i = 0; i < 40; ++i) {
    const PhasePoint p = phase_point({u(rng), u(rng)}, kRing32);
    if (!p.gapped) continue;
    ++gapped;
    EXPECT_EQ(p.indR_F, -1);
    EXPECT_EQ(p.indR_B + p.indR_C, -1);
  }
  EXPECT_GT(gapped, 20);
}

TEST(Crossover, InterfaceCountsMatchFormula) {
  const CrossoverReport r = crossover({patch_point(Patch::III), patch_point(Patch::IV), 0, 0}, kRing32);
  ASSERT_EQ(r.interfaces.size(), 2u);
  for (const auto& i : r.interfaces) {
    EXPECT_EQ(i.W.n_plus, 1);
    EXPECT_EQ(i.W.n_minus, 1);
    EXPECT_TRUE(i.formula_holds);
    EXPECT_TRUE(i.index_condition);
  }
  // The two interfaces see opposite jumps.
  EXPECT_EQ(r.interfaces[0].predicted_2si_plus, -r.interfaces[1].predicted_2si_plus);
  for (const auto& s : r.states) EXPECT_GE(s.mass, 0.9);
}

TEST(Crossover, SamePhaseHasNoEdgeStates) {
  const CrossoverReport r = crossover({patch_point(Patch::I), {0.2, 1.4}, 0, 0}, kRing32);
  for (const auto& i : r.interfaces) {
    EXPECT_EQ(i.W.n_plus + i.W.n_minus + i.Wp.n_plus + i.Wp.n_minus, 0);
    EXPECT_TRUE(i.formula_holds);
  }
}

TEST(Crossover, SmoothProfileInterpolates) {
  const CrossoverSpec spec{{-1.0, 0.0}, {1.0, 0.0}, 0, 1};
  const AngleProfile a = crossover_profile(spec, kRing32);
  EXPECT_NEAR(a(-8).theta1, -1.0, 1e-5);
  EXPECT_NEAR(a(7).theta1, 1.0, 1e-5);
  for (int x = -8; x < 7; ++x) EXPECT_LT(a(x).theta1, a(x + 1).theta1);
  EXPECT_THROW(crossover_profile({{}, {}, 0, 5}, kRing32), GeometryError);
}

// Each block of F1, F2, F3 is a multiple of a power S^k, whose index is -k.
TEST(Named, TuplesFromBlockPowers) {
  EXPECT_EQ(tuple_of(named_halfstep(NamedHalfStep::F1, kRing32)), (FiveTuple{0, 0, -1, -1, 0}));
  EXPECT_EQ(tuple_of(named_halfstep(NamedHalfStep::F2, kRing32)), (FiveTuple{0, 0, 0, 0, -1}));
  EXPECT_EQ(tuple_of(named_halfstep(NamedHalfStep::F3, kRing32)), (FiveTuple{0, 0, -1, -1, 0}));
}

TEST(Named, PhaseBridgeEndpoints) {
  const LatticeOperator f1 = named_halfstep(NamedHalfStep::F1, kRing32).F();
  const LatticeOperator f3 = named_halfstep(NamedHalfStep::F3, kRing32).F();
  EXPECT_LT((phase_bridge(0.0, kRing32).F() - f1).matrix().norm(), 1e-12);
  EXPECT_LT((phase_bridge(1.0, kRing32).F() - f3).matrix().norm(), 1e-12);
  EXPECT_EQ(tuple_of(phase_bridge(0.37, kRing32)), tuple_of(named_halfstep(NamedHalfStep::F1, kRing32)));
}

TEST(Named, BridgeKinds) {
  const BridgeOutcome nb = bridge_path(NamedHalfStep::F1, NamedHalfStep::F2, kRing32);
  EXPECT_EQ(nb.kind, BridgeOutcome::Kind::NoBridge);
  EXPECT_FALSE(nb.differing.empty());
  EXPECT_FALSE(nb.path.has_value());
  const BridgeOutcome p = bridge_path(NamedHalfStep::F1, NamedHalfStep::F3, kRing32, 5);
  EXPECT_EQ(p.kind, BridgeOutcome::Kind::Path);
  ASSERT_TRUE(p.path.has_value());
  EXPECT_EQ(p.path->samples.size(), 5u);
}

TEST(Nongentle, LocalPerturbationShiftsSymmetryIndices) {
  const NongentleResult r = nongentle_perturbation(16);
  EXPECT_LE(r.w_outside, 1e-10);
  EXPECT_GE(r.f_far_half, 0.5);
  EXPECT_EQ(r.si_before.plus, 0);
  EXPECT_EQ(r.si_before.minus, 0);
  EXPECT_EQ(r.si_after.plus, -1);
  EXPECT_EQ(r.si_after.minus, 1);
  EXPECT_EQ(r.si_before.plus + r.si_before.minus, r.si_after.plus + r.si_after.minus);
}

TEST(Nongentle, SingleDefectIsUnitaryAndChiral) {
  const LatticeOperator w = nongentle_single_defect(16);
  EXPECT_LT(w.unitarity_residual(), 1e-10);
  const ChiralGrading g = ChiralGrading::standard(2);
  const Matrix gm = g.gamma(w.chain()).matrix();
  EXPECT_LT((gm * w.matrix() * gm - w.matrix().adjoint()).norm(), 1e-10);
}
