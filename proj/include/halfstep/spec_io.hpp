#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "halfstep/constructions.hpp"
#include "halfstep/homotopy.hpp"
#include "halfstep/indices.hpp"
#include "halfstep/models.hpp"

namespace halfstep::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Rounds to 12 significant digits so dumps are stable across platforms.
double round12(double v);
std::string format12(double v);

CellChain parse_chain(const json& j, const std::string& at = "/chain");
json to_json(const CellChain& c);

using Builder = std::function<HalfStepWalk(const CellChain&)>;

struct OperatorSpec {
  CellChain chain;
  json builder;
  // dense_entries builders cannot be rebuilt on a doubled chain.
  bool rebuildable = true;
};

OperatorSpec parse_operator_spec(const json& j);
Builder make_builder(const json& builder, const std::string& at = "/builder");
// Raw operator for dense_entries builders, F of the half-step otherwise.
LatticeOperator build_operator(const OperatorSpec& spec);

CrossoverSpec parse_crossover(const json& j, const std::string& at);
PathSpec parse_path_spec(const json& j);

json to_json(const FiveTuple& t);
json to_json(const IndexReport& r);
json to_json(const PhasePoint& p);
json to_json(const CrossoverReport& r);
json to_json(const PathVerdict& v);
json to_json(const DriveabilityCertificate& c);
json matrix_entries(const Matrix& m);

std::string phase_csv(const std::vector<PhasePoint>& points);

}  // namespace halfstep::io
