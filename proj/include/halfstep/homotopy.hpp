#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "halfstep/chiral.hpp"
#include "halfstep/indices.hpp"

namespace halfstep {

struct PathSample {
  double t;
  HalfStepWalk walk;
};

struct PathSpec {
  std::vector<PathSample> samples;
  // When present, verify_path may insert intermediate samples.
  std::function<HalfStepWalk(double)> generator;
  double step_bound = 2.0;
  std::string interpolation;
};

PathSpec sample_path(const std::function<HalfStepWalk(double)>& generator, int samples, std::string interpolation);

struct SampleVerdict {
  double t = 0.0;
  double unitarity_residual = 0.0;
  std::array<double, 4> min_block_sv{};
  std::optional<FiveTuple> tuple;
  std::string failure;
};

enum class PathStatus { Admissible, Inadmissible, Inconclusive };

struct PathVerdict {
  PathStatus status = PathStatus::Inconclusive;
  bool admissible = false;
  std::vector<SampleVerdict> samples;
  std::string failure_reason;
  std::optional<double> t_star;
};

struct VerifyOptions {
  ReportOptions report{};
  int max_depth = 12;
  double refine_step = 1.0;
  double unitarity = 1e-9;
  int workers = 1;
};

PathVerdict verify_path(const PathSpec& path, const VerifyOptions& options = {});

struct DriveabilityCertificate {
  int flow_index = 0;
  double flow_residual = 0.0;
  // ‖F − (U_left ⊕ U_right)‖ for the decoupling at the cut and the antipode.
  double decoupling_defect = 0.0;
  // Eigenphases in (−π, π] of the two decoupled pieces: a piecewise-constant generator.
  std::vector<double> left_phases;
  std::vector<double> right_phases;
};

struct Driveability {
  bool driveable = false;
  int flow_index = 0;
  std::optional<DriveabilityCertificate> certificate;
};

Driveability is_driveable(const LatticeOperator& F, int cut = 0);

struct ClassVerdict {
  bool equal = false;
  FiveTuple first;
  FiveTuple second;
  std::vector<std::string> differing;
  // Both operators normalize to zero indices with zero flow.
  bool witness = false;
};

ClassVerdict certify_equal_class(const HalfStepWalk& F1, const HalfStepWalk& F2, const ReportOptions& options = {});

std::vector<std::string> differing_indices(const FiveTuple& a, const FiveTuple& b);

}  // namespace halfstep
