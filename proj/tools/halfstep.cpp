// Command-line front end: builds operators from JSON specs or flags, runs the index
// machinery and writes JSON/CSV artifacts.
#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "halfstep/constructions.hpp"
#include "halfstep/errors.hpp"
#include "halfstep/homotopy.hpp"
#include "halfstep/indices.hpp"
#include "halfstep/models.hpp"
#include "halfstep/parallel.hpp"
#include "halfstep/simd.hpp"
#include "halfstep/spec_io.hpp"

namespace {

using halfstep::io::json;
using namespace halfstep;

struct Options {
  std::string spec;
  std::string out;
  std::string builder;
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::vector<int> params;
  int component = 0;
  int power = 1;
  std::string name;
  int cells = 64;
  int cut = 0;
  int origin = 0;
  std::string route = "auto";
  bool no_certify = false;
  std::string grid = "33x33";
  int workers = 0;
  std::vector<double> left;
  std::vector<double> right;
  int interface_cell = 0;
  int width = 0;
  int samples = 21;
  std::string bridge;
  std::string role = "halfstep";
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(path, std::string("invalid JSON: ") + e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw SpecError(out, "cannot open output file");
  f << text;
}

void emit(const json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

json builder_from_flags(const Options& o) {
  if (o.builder.empty()) throw SpecError("--builder", "either --spec or --builder is required");
  json b{{"type", o.builder}};
  if (o.builder == "splitstep") {
    b["theta1"] = o.theta1;
    b["theta2"] = o.theta2;
  } else if (o.builder == "generating_example") {
    if (o.params.size() != 5) throw SpecError("--params", "expected five integers");
    b["params"] = o.params;
  } else if (o.builder == "shift") {
    b["component"] = o.component;
    b["power"] = o.power;
  } else if (o.builder == "named") {
    b["name"] = o.name;
  }
  return b;
}

io::OperatorSpec operator_spec(const Options& o) {
  if (!o.spec.empty()) return io::parse_operator_spec(read_json(o.spec));
  if (o.cells < 8) throw SpecError("--cells", "need at least 8 cells");
  const CellChain chain = CellChain::centered_ring(o.cells, 2);
  return io::parse_operator_spec(json{{"chain", io::to_json(chain)}, {"builder", builder_from_flags(o)}});
}

ReportOptions report_options(const Options& o) {
  ReportOptions r;
  r.cut = o.cut;
  r.origin = o.origin;
  if (o.route == "auto") {
    r.route = Route::Auto;
  } else if (o.route == "kernel") {
    r.route = Route::Kernel;
  } else if (o.route == "winding") {
    r.route = Route::Winding;
  } else {
    throw SpecError("--route", "expected auto, kernel or winding");
  }
  return r;
}

int workers(const Options& o) { return o.workers > 0 ? o.workers : default_workers(); }

int cmd_indices(const Options& o) {
  const io::OperatorSpec spec = operator_spec(o);
  const ReportOptions ro = report_options(o);
  IndexReport rep = (o.no_certify || !spec.rebuildable)
                        ? full_report(io::make_builder(spec.builder)(spec.chain), ro)
                        : certified_report(io::make_builder(spec.builder), spec.chain, ro);
  json j = io::to_json(rep);
  j["certified_by_doubling"] = !(o.no_certify || !spec.rebuildable);
  emit(j, o.out);
  return rep.all_hold() ? 0 : 3;
}

int cmd_phase_diagram(const Options& o) {
  int n1 = 0;
  int n2 = 0;
  char x = 0;
  std::istringstream gs(o.grid);
  if (!(gs >> n1 >> x >> n2) || x != 'x' || n1 < 2 || n2 < 2) throw SpecError("--grid", "expected NxM");
  const std::vector<PhasePoint> pts = harlequin_grid(n1, n2, CellChain::centered_ring(o.cells, 2), workers(o));
  emit(io::phase_csv(pts), o.out);
  return 0;
}

int cmd_bulk_edge(const Options& o) {
  CrossoverSpec cs;
  CellChain chain = CellChain::centered_ring(o.cells, 2);
  if (!o.spec.empty()) {
    const json j = read_json(o.spec);
    chain = io::parse_chain(j.at("chain"), "/chain");
    cs = io::parse_crossover(j.at("crossover"), "/crossover");
  } else {
    if (o.left.size() != 2) throw SpecError("--left", "expected theta1,theta2");
    if (o.right.size() != 2) throw SpecError("--right", "expected theta1,theta2");
    cs = CrossoverSpec{{o.left[0], o.left[1]}, {o.right[0], o.right[1]}, o.interface_cell, o.width};
  }
  const CrossoverReport rep = crossover(cs, chain);
  json j = io::to_json(rep);
  j["chain"] = io::to_json(chain);
  emit(j, o.out);
  for (const auto& i : rep.interfaces)
    if (!i.formula_holds || !i.index_condition) return 3;
  return 0;
}

int cmd_path_check(const Options& o) {
  PathSpec path;
  if (!o.bridge.empty()) {
    const auto colon = o.bridge.find(':');
    if (colon == std::string::npos) throw SpecError("--bridge", "expected FROM:TO, e.g. F1:F3");
    auto named = [](const std::string& s) {
      if (s == "F1") return NamedHalfStep::F1;
      if (s == "F2") return NamedHalfStep::F2;
      if (s == "F3") return NamedHalfStep::F3;
      throw SpecError("--bridge", "unknown half-step '" + s + "'");
    };
    const BridgeOutcome b =
        bridge_path(named(o.bridge.substr(0, colon)), named(o.bridge.substr(colon + 1)),
                    CellChain::centered_ring(o.cells, 2), o.samples);
    json j{{"schema_version", io::kSchemaVersion},
           {"from", io::to_json(b.from)},
           {"to", io::to_json(b.to)},
           {"differing", b.differing},
           {"note", b.note}};
    if (b.kind == BridgeOutcome::Kind::NoBridge) {
      j["kind"] = "no_bridge";
      emit(j, o.out);
      return 0;
    }
    if (!b.path) {
      j["kind"] = "non_constructive";
      emit(j, o.out);
      return 0;
    }
    j["kind"] = "path";
    VerifyOptions vo;
    vo.workers = workers(o);
    const PathVerdict v = verify_path(*b.path, vo);
    j["verdict"] = io::to_json(v);
    emit(j, o.out);
    return v.admissible ? 0 : (v.status == PathStatus::Inconclusive ? 3 : 2);
  }
  if (o.spec.empty()) throw SpecError("--spec", "path-check needs --spec or --bridge");
  path = io::parse_path_spec(read_json(o.spec));
  VerifyOptions vo;
  vo.workers = workers(o);
  const PathVerdict v = verify_path(path, vo);
  json j = io::to_json(v);
  j["interpolation"] = path.interpolation;
  emit(j, o.out);
  return v.admissible ? 0 : (v.status == PathStatus::Inconclusive ? 3 : 2);
}

int cmd_construct(const Options& o) {
  const io::OperatorSpec spec = operator_spec(o);
  const ChiralGrading g = ChiralGrading::standard(spec.chain.cell_dim());
  LatticeOperator W = io::build_operator(spec);
  if (o.role == "halfstep") {
    W = HalfStepWalk(W, g).W();
  } else if (o.role != "walk") {
    throw SpecError("--role", "expected halfstep or walk");
  }
  const HalfStepWalk F = construct_halfstep(W, g);
  const double residual = operator_norm(F.W().matrix() - W.matrix());
  const SymmetryIndices si = symmetry_indices(W, g);
  json j{{"schema_version", io::kSchemaVersion},
         {"chain", io::to_json(spec.chain)},
         {"residual", io::round12(residual)},
         {"unitarity_residual", io::round12(F.F().unitarity_residual())},
         {"bandwidth", F.F().bandwidth()},
         {"si_plus", si.plus},
         {"si_minus", si.minus},
         {"n_plus", si.n_plus},
         {"n_minus", si.n_minus},
         {"F", io::matrix_entries(F.F().matrix())}};
  emit(j, o.out);
  return residual <= 1e-8 ? 0 : 3;
}

int cmd_flatten(const Options& o) {
  const io::OperatorSpec spec = operator_spec(o);
  const HalfStepWalk walk = io::make_builder(spec.builder)(spec.chain);
  const FlattenResult fr = flatten(walk);
  VerifyOptions vo;
  vo.workers = workers(o);
  vo.report = report_options(o);
  const PathVerdict v = verify_path(sample_path(fr.path, o.samples, "flatten"), vo);
  json j{{"schema_version", io::kSchemaVersion},
         {"chain", io::to_json(spec.chain)},
         {"verdict", io::to_json(v)},
         {"F_flat", io::matrix_entries(fr.flat.F().matrix())}};
  emit(j, o.out);
  return v.admissible ? 0 : (v.status == PathStatus::Inconclusive ? 3 : 2);
}

int cmd_normalize(const Options& o) {
  const io::OperatorSpec spec = operator_spec(o);
  const Normalization n = normalize_to_reference(io::make_builder(spec.builder)(spec.chain), report_options(o));
  json j{{"schema_version", io::kSchemaVersion},
         {"chain", io::to_json(spec.chain)},
         {"multipliers", {{"left", {{"plus_power", n.a}, {"minus_power", n.c}}},
                          {"right", {{"plus_power", 0}, {"minus_power", n.b - n.a}}}}},
         {"normalized_report", io::to_json(n.report)},
         {"normalized_flow_index", n.flow_index}};
  emit(j, o.out);
  return 0;
}

int cmd_self_test(const Options& o) {
  bool ok = true;
  auto line = [&](bool pass, const std::string& what) {
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << what << "\n";
  };
  const CellChain line32(-16, 15, 1, Topology::Line);
  const CellChain ring16 = CellChain::centered_ring(16, 1);
  const LatticeOperator s_line = make_shift(line32, 0, 1);
  const LatticeOperator s_ring = make_shift(ring16, 0, 1);
  const int k = half_chain_index(s_line, 0);
  const int f = flow_index(s_ring, 0);
  const int w = winding_index(symbol_of(s_ring));
  line(k == -1, "right shift half-chain kernel index = " + std::to_string(k));
  line(f == -1, "right shift flow index = " + std::to_string(f));
  line(w == -1, "right shift winding index = " + std::to_string(w));
  const Eigen::Matrix<double, 5, 5> m = generating_matrix().cast<double>();
  const double det = m.determinant();
  line(std::abs(std::abs(det) - 1.0) < 1e-12, "|det M| = " + io::format12(std::abs(det)));
  const auto& active = simd::active();
  std::vector<Complex> data(1001);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = Complex(std::sin(0.37 * i), std::cos(1.3 * i));
  const double ref = simd::scalar_kernels().sum_abs2(data.data(), data.size());
  const double got = active.sum_abs2(data.data(), data.size());
  line(std::abs(ref - got) <= 1e-12 * ref, std::string("kernel equivalence for ") + std::string(simd::isa_name(active.isa)));
  (void)o;
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index computations for chiral half-step quantum walks"};
  app.require_subcommand(1);
  Options o;

  auto add_operator_flags = [&o](CLI::App* c) {
    c->add_option("--spec", o.spec, "operator spec JSON file");
    c->add_option("--builder", o.builder, "splitstep | shift | generating_example | reference | named");
    c->add_option("--theta1", o.theta1, "split-step angle (radians)");
    c->add_option("--theta2", o.theta2, "split-step angle (radians)");
    c->add_option("--params", o.params, "generating example n_L m_L n_R m_R k")->delimiter(',');
    c->add_option("--component", o.component, "shift component");
    c->add_option("--power", o.power, "shift power");
    c->add_option("--name", o.name, "F1 | F2 | F3 for the named builder");
    c->add_option("--cells", o.cells, "ring size when building from flags");
    c->add_option("--cut", o.cut, "half-chain cut cell");
    c->add_option("--origin", o.origin, "cell for localized full-line indices");
    c->add_option("--route", o.route, "auto | kernel | winding");
    c->add_option("--out", o.out, "output file (default stdout)");
  };

  auto* indices = app.add_subcommand("indices", "five-tuple, derived indices and consistency report");
  add_operator_flags(indices);
  indices->add_flag("--no-certify", o.no_certify, "skip the chain-doubling recheck");

  auto* phase = app.add_subcommand("phase-diagram", "split-step phase diagram CSV");
  phase->add_option("--grid", o.grid, "NxM offset grid");
  phase->add_option("--cells", o.cells, "ring size");
  phase->add_option("--workers", o.workers, "worker threads (default HALFSTEP_WORKERS or hardware)");
  phase->add_option("--out", o.out, "output file (default stdout)");

  auto* edge = app.add_subcommand("bulk-edge", "crossover edge-state report");
  edge->add_option("--spec", o.spec, "JSON with chain and crossover");
  edge->add_option("--left", o.left, "theta1,theta2 left of the interface")->delimiter(',');
  edge->add_option("--right", o.right, "theta1,theta2 right of the interface")->delimiter(',');
  edge->add_option("--interface", o.interface_cell, "interface cell");
  edge->add_option("--width", o.width, "transition width (0 = hard step)");
  edge->add_option("--cells", o.cells, "ring size");
  edge->add_option("--out", o.out, "output file (default stdout)");

  auto* path = app.add_subcommand("path-check", "verify a path of half-step operators");
  path->add_option("--spec", o.spec, "path spec JSON");
  path->add_option("--bridge", o.bridge, "FROM:TO among F1, F2, F3");
  path->add_option("--samples", o.samples, "samples for --bridge");
  path->add_option("--cells", o.cells, "ring size for --bridge");
  path->add_option("--workers", o.workers, "worker threads");
  path->add_option("--out", o.out, "output file (default stdout)");

  auto* construct = app.add_subcommand("construct-halfstep", "half-step operator for a chiral walk");
  add_operator_flags(construct);
  construct->add_option("--role", o.role, "walk: the spec is W itself; halfstep: use its W");

  auto* flat = app.add_subcommand("flatten", "flatten path and flat-band endpoint");
  add_operator_flags(flat);
  flat->add_option("--samples", o.samples, "path samples");
  flat->add_option("--workers", o.workers, "worker threads");

  auto* norm = app.add_subcommand("normalize", "shift normalization to the reference operator");
  add_operator_flags(norm);

  auto* self = app.add_subcommand("self-test", "sign-convention calibration and sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*indices) return cmd_indices(o);
    if (*phase) return cmd_phase_diagram(o);
    if (*edge) return cmd_bulk_edge(o);
    if (*path) return cmd_path_check(o);
    if (*construct) return cmd_construct(o);
    if (*flat) return cmd_flatten(o);
    if (*norm) return cmd_normalize(o);
    if (*self) return cmd_self_test(o);
  } catch (const SpecError& e) {
    std::cerr << "malformed spec at " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "malformed spec: " << e.what() << "\n";
    return 1;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 1;
  } catch (const AdmissibilityError& e) {
    std::cerr << "admissibility error: " << e.what() << "\n";
    return 2;
  } catch (const IndexObstruction& e) {
    std::cerr << "index obstruction: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
