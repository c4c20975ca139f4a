// Acceptance run: one PASS/FAIL line per primary criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "halfstep/constructions.hpp"
#include "halfstep/errors.hpp"
#include "halfstep/homotopy.hpp"
#include "halfstep/indices.hpp"
#include "halfstep/models.hpp"
#include "halfstep/parallel.hpp"
#include "support.hpp"

using namespace halfstep;
using halfstep::support::count_near;
using halfstep::support::spectrum;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || secs <= limit_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s [%2d] %s: %s (%.2f s", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  if (limit_s > 0) std::printf(" / limit %.0f s", limit_s);
  std::printf(")\n");
  std::fflush(stdout);
}

std::string tuple_str(const FiveTuple& t) {
  std::ostringstream s;
  s << "(" << t.ind_A << "," << t.ind_B << "," << t.indR_A << "," << t.indR_B << "," << t.indR_C << ")";
  return s.str();
}

std::vector<GeneratingParams> random_params(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> u(-3, 3);
  std::vector<GeneratingParams> out;
  for (int i = 0; i < n; ++i) out.push_back({u(rng), u(rng), u(rng), u(rng), u(rng)});
  return out;
}

// Random chiral walks with no eigenvalue within 0.05 of ±1.
std::vector<LatticeOperator> random_gapped_walks(int n, unsigned seed) {
  std::mt19937 rng(seed);
  const int sizes[] = {16, 32, 64};
  std::vector<LatticeOperator> out;
  while (static_cast<int>(out.size()) < n) {
    const CellChain chain = CellChain::centered_ring(sizes[out.size() % 3], 2);
    LatticeOperator w = support::random_chiral_walk(chain, rng);
    const Eigen::VectorXcd ev = spectrum(w);
    if (count_near(ev, 1.0, 0.05) == 0 && count_near(ev, -1.0, 0.05) == 0) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

int main() {
  const CellChain ring64 = CellChain::centered_ring(64, 2);
  const CellChain ring32 = CellChain::centered_ring(32, 2);
  const int workers = default_workers();

  run(1, "harlequin patch values", 10, [&] {
    struct Expect {
      Patch patch;
      std::array<int, 3> indR;
      std::pair<int, int> siR;
    };
    const Expect expect[] = {{Patch::I, {-1, -1, 0}, {0, 1}},
                             {Patch::II, {0, 0, -1}, {0, -1}},
                             {Patch::III, {-1, 0, -1}, {-1, 0}},
                             {Patch::IV, {0, -1, 0}, {1, 0}}};
    Outcome o;
    for (const auto& e : expect) {
      const PhasePoint p = phase_point(patch_point(e.patch), ring64);
      const bool ok = p.gapped && p.indR_A == e.indR[0] && p.indR_B == e.indR[1] && p.indR_C == e.indR[2] &&
                      p.siR_W == e.siR.first && p.siR_Wp == e.siR.second && patch_of(p) == e.patch;
      o.pass = o.pass && ok;
      std::ostringstream s;
      s << patch_name(e.patch) << "={" << p.indR_A << "," << p.indR_B << "," << p.indR_C << "}/(" << p.siR_W << ","
        << p.siR_Wp << ") ";
      o.detail += s.str();
    }
    return o;
  });

  run(2, "indR_F = -1 on the 33x33 grid", 120, [&] {
    const std::vector<PhasePoint> pts = harlequin_grid(33, 33, ring64, workers);
    int gapped = 0;
    int bad = 0;
    for (const auto& p : pts) {
      if (!p.gapped) continue;
      ++gapped;
      bad += p.indR_F != -1;
    }
    return Outcome{bad == 0 && gapped > 0,
                   std::to_string(gapped) + " gapped points, " + std::to_string(bad) + " with indR_F != -1"};
  });

  const std::vector<GeneratingParams> gen = random_params(10, 2024);
  std::vector<IndexReport> gen_reports;

  run(3, "generating example tuple = M v", 30, [&] {
    const auto m = generating_matrix();
    const long det = std::lround(m.cast<double>().determinant());
    Outcome o{std::abs(det) == 1, "det M = " + std::to_string(det) + ";"};
    int bad = 0;
    for (const auto& p : gen) {
      gen_reports.push_back(full_report(generating_example(p, ring64)));
      const FiveTuple& got = gen_reports.back().five_tuple;
      // Oracle: direct integer product.
      const auto v = p.values();
      std::array<int, 5> mv{};
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) mv[static_cast<std::size_t>(i)] += m(i, j) * v[static_cast<std::size_t>(j)];
      if (got.values() != mv) {
        ++bad;
        o.detail += " mismatch at " + tuple_str(got);
      }
    }
    o.pass = o.pass && bad == 0;
    o.detail += " " + std::to_string(gen.size() - bad) + "/" + std::to_string(gen.size()) + " tuples match";
    return o;
  });

  const std::vector<LatticeOperator> walks = random_gapped_walks(20, 99);
  std::vector<HalfStepWalk> constructed;

  run(4, "consistency suite", 0, [&] {
    int checked = 0;
    std::vector<std::string> broken;
    auto check = [&](const IndexReport& r, const std::string& label) {
      ++checked;
      const DerivedIndices& d = r.derived;
      const bool sum_rule = 2 * d.si_plus == d.si + d.si_prime;
      if (!r.all_hold() || !sum_rule) broken.push_back(label);
    };
    for (double t1 : offset_grid(9))
      for (double t2 : offset_grid(9)) {
        const HalfStepWalk w = splitstep_halfstep(SplitStepParams{t1, t2}, ring32);
        if (block_gaps(w, true).min() <= kThresholds.gap) continue;
        check(full_report(w), "split-step");
      }
    for (std::size_t i = 0; i < gen_reports.size(); ++i) check(gen_reports[i], "generating " + std::to_string(i));
    for (std::size_t i = 0; i < 6; ++i) {
      const LatticeOperator& w = walks[i];
      const HalfStepWalk f = construct_halfstep(w, ChiralGrading::standard(2));
      check(full_report(f), "constructed " + std::to_string(i));
    }
    check(full_report(crossover_walk({patch_point(Patch::III), patch_point(Patch::IV), 0, 0}, ring32)),
          "crossover");
    std::string detail = std::to_string(checked) + " operators, " + std::to_string(broken.size()) + " violations";
    for (const auto& b : broken) detail += " " + b;
    return Outcome{broken.empty(), detail};
  });

  run(5, "flow / kernel / winding routes agree", 0, [&] {
    int compared = 0;
    std::vector<std::string> bad;
    auto three = [&](const LatticeOperator& x, const std::string& label) {
      ++compared;
      const int f = x.unitarity_residual() < 1e-10 ? flow_index(x, 0) : polar_flow_index(x, 0);
      const int k = half_chain_index(x, 0);
      const int w = winding_index(symbol_of(x));
      if (f != k || k != w) bad.push_back(label + " " + std::to_string(f) + "/" + std::to_string(k) + "/" + std::to_string(w));
      return f;
    };
    const int s = three(make_shift(CellChain::centered_ring(32, 1), 0, 1), "shift");
    if (s != -1) bad.push_back("shift index " + std::to_string(s));
    std::vector<HalfStepWalk> corpus;
    for (Patch p : {Patch::I, Patch::II, Patch::III, Patch::IV}) corpus.push_back(splitstep_halfstep(patch_point(p), ring64));
    corpus.push_back(splitstep_halfstep(SplitStepParams{0.3, 1.2}, ring64));
    corpus.push_back(splitstep_halfstep(SplitStepParams{-2.1, 0.7}, ring64));
    for (NamedHalfStep n : {NamedHalfStep::F1, NamedHalfStep::F2, NamedHalfStep::F3})
      corpus.push_back(named_halfstep(n, ring64));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& w = corpus[i];
      const std::string tag = "#" + std::to_string(i);
      three(w.F(), tag + " F");
      three(w.blocks().A, tag + " A");
      three(w.blocks().B, tag + " B");
      three(w.blocks().C, tag + " C");
      three(w.blocks().D, tag + " D");
    }
    std::string detail = std::to_string(compared) + " operators compared";
    for (const auto& b : bad) detail += "; " + b;
    return Outcome{bad.empty(), detail};
  });

  run(6, "construct_halfstep residual <= 1e-8", 0, [&] {
    double worst = 0.0;
    int n = 0;
    const ChiralGrading g = ChiralGrading::standard(2);
    for (const auto& w : walks) {
      const HalfStepWalk f = construct_halfstep(w, g);
      constructed.push_back(f);
      worst = std::max(worst, operator_norm(f.W().matrix() - w.matrix()));
      ++n;
    }
    for (Patch p : {Patch::I, Patch::II, Patch::III, Patch::IV}) {
      const LatticeOperator w = splitstep_halfstep(patch_point(p), ring32).W();
      const HalfStepWalk f = construct_halfstep(w, g);
      worst = std::max(worst, operator_norm(f.W().matrix() - w.matrix()));
      ++n;
    }
    std::ostringstream s;
    s << n << " walks, worst residual " << worst;
    return Outcome{worst <= 1e-8, s.str()};
  });

  run(7, "bulk-edge III<->IV on a 64-cell ring", 30, [&] {
    const CrossoverSpec spec{patch_point(Patch::III), patch_point(Patch::IV), 0, 0};
    const CrossoverReport r = crossover(spec, ring64);
    Outcome o;
    for (const auto& i : r.interfaces) {
      const bool counts = i.W.n_plus == 1 && i.W.n_minus == 1;
      o.pass = o.pass && counts && i.formula_holds && i.index_condition;
      o.detail += "cell " + std::to_string(i.cell) + ": (n+,n-)=(" + std::to_string(i.W.n_plus) + "," +
                  std::to_string(i.W.n_minus) + ") formula " + (i.formula_holds ? "ok" : "broken") + "; ";
    }
    double min_mass = 1.0;
    for (const auto& s : r.states) min_mass = std::min(min_mass, s.mass);
    o.pass = o.pass && r.interfaces.size() == 2 && min_mass >= 0.9;
    std::ostringstream s;
    s << "min localization " << min_mass;
    o.detail += s.str();
    return o;
  });

  run(8, "no-bridge certificate and F1->F3 bridge", 0, [&] {
    const BridgeOutcome nb = bridge_path(NamedHalfStep::F1, NamedHalfStep::F2, ring32);
    const FiveTuple f1{0, 0, -1, -1, 0};
    const FiveTuple f2{0, 0, 0, 0, -1};
    const bool cert = nb.kind == BridgeOutcome::Kind::NoBridge && nb.from == f1 && nb.to == f2;
    const BridgeOutcome br = bridge_path(NamedHalfStep::F1, NamedHalfStep::F3, ring32, 21);
    VerifyOptions vo;
    vo.workers = workers;
    const PathVerdict v = verify_path(*br.path, vo);
    bool constant = v.admissible;
    for (const auto& s : v.samples) constant = constant && s.tuple && *s.tuple == f1;
    return Outcome{cert && br.kind == BridgeOutcome::Kind::Path && v.admissible && constant,
                   "F1 " + tuple_str(nb.from) + " vs F2 " + tuple_str(nb.to) + "; bridge " +
                       std::to_string(v.samples.size()) + " samples " + (v.admissible ? "admissible" : v.failure_reason)};
  });

  run(9, "flattening of 10 corpus operators", 0, [&] {
    std::vector<std::pair<std::string, HalfStepWalk>> corpus;
    corpus.emplace_back("split(0,pi/4)", splitstep_halfstep(SplitStepParams{0, kPi / 4}, ring32));
    corpus.emplace_back("split(0.3,1.2)", splitstep_halfstep(SplitStepParams{0.3, 1.2}, ring32));
    corpus.emplace_back("split(-1,0.4)", splitstep_halfstep(SplitStepParams{-1.0, 0.4}, ring32));
    corpus.emplace_back("generating 0", generating_example(gen[0], ring32));
    corpus.emplace_back("generating 1", generating_example(gen[1], ring32));
    corpus.emplace_back("F1", named_halfstep(NamedHalfStep::F1, ring32));
    corpus.emplace_back("F2", named_halfstep(NamedHalfStep::F2, ring32));
    corpus.emplace_back("F3", named_halfstep(NamedHalfStep::F3, ring32));
    corpus.emplace_back("crossover", crossover_walk({patch_point(Patch::III), patch_point(Patch::IV), 0, 0}, ring32));
    corpus.emplace_back("constructed", constructed.front());
    Outcome o;
    int ok = 0;
    VerifyOptions vo;
    vo.workers = workers;
    for (const auto& [name, w] : corpus) {
      const FlattenResult fr = flatten(w);
      const PathVerdict v = verify_path(sample_path(fr.path, 11, "flatten"), vo);
      const Eigen::VectorXcd before = spectrum(w.W());
      const Eigen::VectorXcd after = spectrum(fr.flat.W());
      const Complex i(0, 1);
      const int retained = count_near(after, 1.0, 1e-8) + count_near(after, -1.0, 1e-8);
      const int flat = count_near(after, i, 1e-8) + count_near(after, -i, 1e-8);
      const bool spectra = retained + flat == after.size() &&
                           count_near(before, 1.0, 1e-8) == count_near(after, 1.0, 1e-8) &&
                           count_near(before, -1.0, 1e-8) == count_near(after, -1.0, 1e-8);
      const bool same = full_report(w).five_tuple == full_report(fr.flat).five_tuple;
      if (v.admissible && spectra && same) {
        ++ok;
      } else {
        o.pass = false;
        o.detail += name + (v.admissible ? "" : " path:" + v.failure_reason) + (spectra ? "" : " spectrum") +
                    (same ? "" : " tuple") + "; ";
      }
    }
    o.detail += std::to_string(ok) + "/" + std::to_string(corpus.size()) + " flattened";
    return o;
  });

  run(10, "driveability", 0, [&] {
    std::mt19937 rng(5);
    int driveable = 0;
    for (int k = 0; k < 10; ++k) {
      const LatticeOperator u = support::expi(support::random_banded_hermitian(ring32, 1, 0.3, rng));
      driveable += is_driveable(u).driveable;
    }
    const Driveability split = is_driveable(splitstep_halfstep(SplitStepParams{0.3, 1.2}, ring32).F());
    return Outcome{driveable == 10 && !split.driveable,
                   std::to_string(driveable) + "/10 exp(iH) driveable; split-step driveable=" +
                       (split.driveable ? "true" : "false") + " (flow " + std::to_string(split.flow_index) + ")"};
  });

  run(11, "non-gentle perturbation", 0, [&] {
    Outcome o;
    for (int L : {32, 64, 128}) {
      const NongentleResult r = nongentle_perturbation(L);
      const int si_before = r.si_before.plus + r.si_before.minus;
      const int si_after = r.si_after.plus + r.si_after.minus;
      const bool ok = r.w_outside <= 1e-10 && r.f_far_half >= 0.5 && si_before == si_after;
      o.pass = o.pass && ok;
      std::ostringstream s;
      s << "L=" << L << ": |W~-W| outside " << r.w_outside << ", far-half " << r.f_far_half << ", si " << si_before
        << "->" << si_after << "; ";
      o.detail += s.str();
    }
    return o;
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
