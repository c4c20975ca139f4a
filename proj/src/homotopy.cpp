#include "halfstep/homotopy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "halfstep/constructions.hpp"
#include "halfstep/errors.hpp"
#include "halfstep/parallel.hpp"

namespace halfstep {
namespace {

SampleVerdict evaluate(double t, const HalfStepWalk& walk, const VerifyOptions& options) {
  SampleVerdict v;
  v.t = t;
  v.unitarity_residual = walk.F().unitarity_residual();
  if (v.unitarity_residual > options.unitarity) {
    v.failure = "unitarity residual above tolerance";
    return v;
  }
  const bool ti = walk.chain().is_ring() && is_translation_invariant(walk.F());
  v.min_block_sv = block_gaps(walk, ti).values;
  for (std::size_t i = 0; i < 4; ++i) {
    if (v.min_block_sv[i] <= kThresholds.gap) {
      v.failure = std::string("gap closed in block ") + "ABCD"[i];
      return v;
    }
  }
  ReportOptions ro = options.report;
  ro.eigenspace_checks = false;
  try {
    v.tuple = full_report(walk, ro).five_tuple;
  } catch (const Error& e) {
    v.failure = e.what();
  }
  return v;
}

}  // namespace

PathSpec sample_path(const std::function<HalfStepWalk(double)>& generator, int samples, std::string interpolation) {
  if (samples < 2) throw GeometryError("a path needs at least two samples");
  PathSpec p;
  p.generator = generator;
  p.interpolation = std::move(interpolation);
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    p.samples.push_back(PathSample{t, generator(t)});
  }
  return p;
}

PathVerdict verify_path(const PathSpec& path, const VerifyOptions& options) {
  if (path.samples.size() < 2) throw GeometryError("a path needs at least two samples");
  for (std::size_t i = 1; i < path.samples.size(); ++i)
    if (!(path.samples[i].t > path.samples[i - 1].t)) throw GeometryError("path parameters must increase");

  std::vector<SampleVerdict> base(path.samples.size());
  parallel_for(path.samples.size(), options.workers,
               [&](std::size_t i) { base[i] = evaluate(path.samples[i].t, path.samples[i].walk, options); });

  std::map<double, SampleVerdict> all;
  for (const auto& v : base) all.emplace(v.t, v);
  PathVerdict verdict;
  bool inconclusive = false;

  auto fail_at = [&](const SampleVerdict& v) {
    if (!verdict.t_star || v.t < *verdict.t_star) {
      verdict.t_star = v.t;
      verdict.failure_reason = v.failure;
    }
  };

  // Checks the interval between two evaluated samples, bisecting when the step is
  // large or the tuple jumps.
  std::function<void(double, const HalfStepWalk&, const SampleVerdict&, double, const HalfStepWalk&,
                     const SampleVerdict&, int)>
      check = [&](double t0, const HalfStepWalk& w0, const SampleVerdict& v0, double t1, const HalfStepWalk& w1,
                  const SampleVerdict& v1, int depth) {
        if (!v0.failure.empty() || !v1.failure.empty()) return;
        const double step = operator_norm(w1.F().matrix() - w0.F().matrix());
        const bool jump = !(*v0.tuple == *v1.tuple);
        if (step < options.refine_step && !jump) return;
        if (!path.generator) {
          if (jump) {
            SampleVerdict j = v1;
            j.failure = "index jump between samples";
            fail_at(j);
          } else if (step >= path.step_bound) {
            inconclusive = true;
          }
          return;
        }
        if (depth >= options.max_depth) {
          inconclusive = true;
          return;
        }
        const double tm = 0.5 * (t0 + t1);
        std::optional<HalfStepWalk> wm;
        SampleVerdict vm;
        try {
          wm.emplace(path.generator(tm));
          vm = evaluate(tm, *wm, options);
        } catch (const Error& e) {
          vm.t = tm;
          vm.failure = e.what();
        }
        all.emplace(tm, vm);
        if (!vm.failure.empty()) {
          fail_at(vm);
          return;
        }
        check(t0, w0, v0, tm, *wm, vm, depth + 1);
        check(tm, *wm, vm, t1, w1, v1, depth + 1);
      };

  for (const auto& v : base)
    if (!v.failure.empty()) fail_at(v);
  for (std::size_t i = 1; i < path.samples.size(); ++i)
    check(path.samples[i - 1].t, path.samples[i - 1].walk, base[i - 1], path.samples[i].t, path.samples[i].walk,
          base[i], 0);

  for (auto& [t, v] : all) verdict.samples.push_back(v);
  if (verdict.t_star) {
    verdict.status = PathStatus::Inadmissible;
  } else if (inconclusive) {
    verdict.status = PathStatus::Inconclusive;
    verdict.failure_reason = "refinement depth exhausted";
  } else {
    verdict.status = PathStatus::Admissible;
  }
  verdict.admissible = verdict.status == PathStatus::Admissible;
  return verdict;
}

Driveability is_driveable(const LatticeOperator& F, int cut) {
  Driveability d;
  const FlowResult flow = flow_sum(F, cut);
  if (flow.residual > kThresholds.flow_error) throw AdmissibilityError("flow sum is not an integer");
  d.flow_index = flow.index;
  d.driveable = flow.index == 0;
  if (!d.driveable) return d;

  DriveabilityCertificate cert;
  cert.flow_index = flow.index;
  cert.flow_residual = flow.residual;
  const LatticeOperator left = unitarize(compress(F, {cut, Side::LtA}));
  const LatticeOperator right = unitarize(compress(F, {cut, Side::GeqA}));
  Matrix dec = Matrix::Zero(F.dim(), F.dim());
  dec.topLeftCorner(left.dim(), left.dim()) = left.matrix();
  dec.bottomRightCorner(right.dim(), right.dim()) = right.matrix();
  cert.decoupling_defect = operator_norm(F.matrix() - dec);
  auto phases = [](const LatticeOperator& u) {
    Eigen::ComplexEigenSolver<Matrix> es(u.matrix(), false);
    std::vector<double> p;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) p.push_back(std::arg(es.eigenvalues()(i)));
    std::sort(p.begin(), p.end());
    return p;
  };
  cert.left_phases = phases(left);
  cert.right_phases = phases(right);
  d.certificate = std::move(cert);
  return d;
}

std::vector<std::string> differing_indices(const FiveTuple& a, const FiveTuple& b) {
  static const char* names[5] = {"ind_A", "ind_B", "indR_A", "indR_B", "indR_C"};
  std::vector<std::string> out;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < 5; ++i)
    if (va[i] != vb[i]) out.emplace_back(names[i]);
  return out;
}

ClassVerdict certify_equal_class(const HalfStepWalk& F1, const HalfStepWalk& F2, const ReportOptions& options) {
  ClassVerdict v;
  v.first = full_report(F1, options).five_tuple;
  v.second = full_report(F2, options).five_tuple;
  v.differing = differing_indices(v.first, v.second);
  v.equal = v.differing.empty();
  if (!v.equal) return v;
  try {
    const Normalization n1 = normalize_to_reference(flatten(F1).flat, options);
    const Normalization n2 = normalize_to_reference(flatten(F2).flat, options);
    v.witness = n1.flow_index == 0 && n2.flow_index == 0;
  } catch (const Error&) {
    v.witness = false;
  }
  return v;
}

}  // namespace halfstep
