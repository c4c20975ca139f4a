#include "halfstep/spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "halfstep/errors.hpp"

namespace halfstep::io {
namespace {

const json& field(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) throw SpecError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(at + "/" + key, "missing field");
  return *it;
}

int get_int(const json& j, const std::string& key, const std::string& at) {
  const json& v = field(j, key, at);
  if (!v.is_number_integer()) throw SpecError(at + "/" + key, "expected an integer");
  return v.get<int>();
}

int get_int_or(const json& j, const std::string& key, const std::string& at, int fallback) {
  return j.contains(key) ? get_int(j, key, at) : fallback;
}

double get_double(const json& j, const std::string& key, const std::string& at) {
  const json& v = field(j, key, at);
  if (!v.is_number()) throw SpecError(at + "/" + key, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key, const std::string& at) {
  const json& v = field(j, key, at);
  if (!v.is_string()) throw SpecError(at + "/" + key, "expected a string");
  return v.get<std::string>();
}

SplitStepParams get_angles(const json& j, const std::string& key, const std::string& at) {
  const json& v = field(j, key, at);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SpecError(at + "/" + key, "expected [theta1, theta2]");
  return {v[0].get<double>(), v[1].get<double>()};
}

ChiralGrading parse_grading(const json& b, const std::string& at, int cell_dim) {
  if (!b.contains("grading")) return ChiralGrading::standard(cell_dim);
  const json& g = b["grading"];
  if (!g.is_array()) throw SpecError(at + "/grading", "expected an array of +1/-1");
  std::vector<int> signs;
  for (const auto& s : g) {
    if (!s.is_number_integer()) throw SpecError(at + "/grading", "expected integers");
    signs.push_back(s.get<int>());
  }
  try {
    return ChiralGrading(std::move(signs));
  } catch (const GeometryError& e) {
    throw SpecError(at + "/grading", e.what());
  }
}

NamedHalfStep parse_named(const std::string& s, const std::string& at) {
  if (s == "F1") return NamedHalfStep::F1;
  if (s == "F2") return NamedHalfStep::F2;
  if (s == "F3") return NamedHalfStep::F3;
  throw SpecError(at, "unknown named half-step '" + s + "'");
}

Matrix parse_dense(const json& b, const std::string& at, const CellChain& c) {
  const json& e = field(b, "entries", at);
  const Index n = c.dim();
  if (!e.is_array() || static_cast<Index>(e.size()) != n * n)
    throw SpecError(at + "/entries", "expected " + std::to_string(n * n) + " [re, im] pairs");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const json& z = e[static_cast<std::size_t>(i * n + j)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw SpecError(at + "/entries/" + std::to_string(i * n + j), "expected [re, im]");
      m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

int dense_bandwidth(const json& b, const std::string& at, const CellChain& c) {
  const int bw = get_int_or(b, "bandwidth", at, c.band_cap());
  if (bw < 0) throw SpecError(at + "/bandwidth", "must be nonnegative");
  return bw;
}

json chain_compact(const CellChain& c) { return to_json(c); }

json counts_json(const FrameCounts& f) {
  return json{{"n_plus", f.n_plus}, {"n_minus", f.n_minus}, {"si_plus", f.si_plus}, {"si_minus", f.si_minus}};
}

json complex_list(const std::vector<Complex>& v) {
  json a = json::array();
  for (const Complex& z : v) a.push_back(json::array({round12(z.real()), round12(z.imag())}));
  return a;
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

CellChain parse_chain(const json& j, const std::string& at) {
  const int x_min = get_int(j, "x_min", at);
  const int x_max = get_int(j, "x_max", at);
  const int d = get_int_or(j, "cell_dim", at, 2);
  Topology topo = Topology::Ring;
  if (j.contains("topology")) {
    const std::string t = get_string(j, "topology", at);
    if (t == "Ring" || t == "ring") {
      topo = Topology::Ring;
    } else if (t == "Line" || t == "line") {
      topo = Topology::Line;
    } else {
      throw SpecError(at + "/topology", "expected Ring or Line");
    }
  }
  try {
    return CellChain(x_min, x_max, d, topo);
  } catch (const GeometryError& e) {
    throw SpecError(at, e.what());
  }
}

json to_json(const CellChain& c) {
  return json{{"x_min", c.x_min()},
              {"x_max", c.x_max()},
              {"cell_dim", c.cell_dim()},
              {"topology", c.is_ring() ? "Ring" : "Line"}};
}

CrossoverSpec parse_crossover(const json& j, const std::string& at) {
  CrossoverSpec s;
  s.left = get_angles(j, "left", at);
  s.right = get_angles(j, "right", at);
  s.interface_cell = get_int_or(j, "interface_cell", at, 0);
  s.transition_width = get_int_or(j, "transition_width", at, 0);
  if (s.transition_width < 0) throw SpecError(at + "/transition_width", "must be nonnegative");
  return s;
}

Builder make_builder(const json& b, const std::string& at) {
  const std::string type = get_string(b, "type", at);
  if (type == "shift") {
    const int component = get_int_or(b, "component", at, 0);
    const int power = get_int_or(b, "power", at, 1);
    return [b, at, component, power](const CellChain& c) {
      return HalfStepWalk(make_shift(c, component, power), parse_grading(b, at, c.cell_dim()));
    };
  }
  if (type == "splitstep") {
    if (b.contains("crossover")) {
      const CrossoverSpec cs = parse_crossover(b["crossover"], at + "/crossover");
      return [cs](const CellChain& c) { return crossover_walk(cs, c); };
    }
    const SplitStepParams p{get_double(b, "theta1", at), get_double(b, "theta2", at)};
    return [p](const CellChain& c) { return splitstep_halfstep(p, c); };
  }
  if (type == "generating_example") {
    const json& v = field(b, "params", at);
    if (!v.is_array() || v.size() != 5) throw SpecError(at + "/params", "expected five integers");
    for (const auto& x : v)
      if (!x.is_number_integer()) throw SpecError(at + "/params", "expected five integers");
    const GeneratingParams p{v[0].get<int>(), v[1].get<int>(), v[2].get<int>(), v[3].get<int>(), v[4].get<int>()};
    return [p](const CellChain& c) { return generating_example(p, c); };
  }
  if (type == "reference") return [](const CellChain& c) { return reference_halfstep(c); };
  if (type == "named") {
    const NamedHalfStep n = parse_named(get_string(b, "name", at), at + "/name");
    return [n](const CellChain& c) { return named_halfstep(n, c); };
  }
  if (type == "shift_content") {
    const int a = get_int(b, "a", at);
    const int bb = get_int(b, "b", at);
    const int c3 = get_int(b, "c", at);
    return [a, bb, c3](const CellChain& c) { return shift_content_halfstep(a, bb, c3, c); };
  }
  if (type == "phase_bridge") {
    const double t = get_double(b, "t", at);
    return [t](const CellChain& c) { return phase_bridge(t, c); };
  }
  if (type == "dense_entries") {
    return [b, at](const CellChain& c) {
      return HalfStepWalk(LatticeOperator(c, parse_dense(b, at, c), dense_bandwidth(b, at, c)),
                          parse_grading(b, at, c.cell_dim()));
    };
  }
  throw SpecError(at + "/type", "unknown builder '" + type + "'");
}

OperatorSpec parse_operator_spec(const json& j) {
  OperatorSpec s{parse_chain(field(j, "chain", ""), "/chain"), field(j, "builder", ""), true};
  const std::string type = get_string(s.builder, "type", "/builder");
  s.rebuildable = type != "dense_entries";
  make_builder(s.builder, "/builder");  // validates eagerly
  return s;
}

LatticeOperator build_operator(const OperatorSpec& spec) {
  if (!spec.rebuildable)
    return LatticeOperator(spec.chain, parse_dense(spec.builder, "/builder", spec.chain),
                           dense_bandwidth(spec.builder, "/builder", spec.chain));
  return make_builder(spec.builder)(spec.chain).F();
}

PathSpec parse_path_spec(const json& j) {
  const CellChain chain = parse_chain(field(j, "chain", ""), "/chain");
  const std::string interp = get_string(j, "interpolation", "");
  const int samples = get_int_or(j, "samples", "", 21);
  if (samples < 2) throw SpecError("/samples", "need at least two samples");
  if (interp != "samples" && interp != "phase" && interp != "flatten" && interp != "linear-renormalized")
    throw SpecError("/interpolation", "unknown interpolation '" + interp + "'");
  if (interp == "samples") {
    const json& list = field(j, "custom", "");
    if (!list.is_array() || list.size() < 2) throw SpecError("/custom", "expected at least two samples");
    PathSpec p;
    p.interpolation = interp;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = "/custom/" + std::to_string(i);
      const double t = get_double(list[i], "t", at);
      p.samples.push_back(PathSample{t, make_builder(field(list[i], "builder", at), at + "/builder")(chain)});
    }
    return p;
  }
  if (interp == "phase") {
    return sample_path([chain](double t) { return phase_bridge(t, chain); }, samples, interp);
  }
  const HalfStepWalk from = make_builder(field(j, "from", ""), "/from")(chain);
  if (interp == "flatten") {
    FlattenResult fr = flatten(from);
    return sample_path(fr.path, samples, interp);
  }
  const HalfStepWalk to = make_builder(field(j, "to", ""), "/to")(chain);
  return linear_renormalized_path(from, to, samples);
}

json to_json(const FiveTuple& t) {
  return json{{"ind_A", t.ind_A}, {"ind_B", t.ind_B}, {"indR_A", t.indR_A}, {"indR_B", t.indR_B}, {"indR_C", t.indR_C}};
}

json to_json(const IndexReport& r) {
  json cons = json::array();
  for (const auto& rel : r.consistency) cons.push_back(json{{"relation", rel.name}, {"holds", rel.holds}});
  const DerivedIndices& d = r.derived;
  return json{{"schema_version", kSchemaVersion},
              {"five_tuple", to_json(r.five_tuple)},
              {"derived",
               {{"si", d.si},
                {"siR", d.siR},
                {"si_prime", d.si_prime},
                {"siR_prime", d.siR_prime},
                {"si_plus", d.si_plus},
                {"si_minus", d.si_minus},
                {"indR_F", d.indR_F},
                {"ind_F", d.ind_F}}},
              {"consistency", cons},
              {"chain", chain_compact(r.chain)},
              {"route", r.route}};
}

json to_json(const PhasePoint& p) {
  json j{{"theta1", round12(p.theta1)}, {"theta2", round12(p.theta2)}, {"gapped", p.gapped}, {"gap", round12(p.gap)}};
  if (p.gapped) {
    j["indR_A"] = p.indR_A;
    j["indR_B"] = p.indR_B;
    j["indR_C"] = p.indR_C;
    j["siR_W"] = p.siR_W;
    j["siR_Wp"] = p.siR_Wp;
    j["indR_F"] = p.indR_F;
  }
  return j;
}

json to_json(const CrossoverReport& r) {
  json interfaces = json::array();
  for (const auto& i : r.interfaces) {
    interfaces.push_back(json{{"cell", i.cell},
                              {"wrap", i.wrap},
                              {"left", {round12(i.left.theta1), round12(i.left.theta2)}},
                              {"right", {round12(i.right.theta1), round12(i.right.theta2)}},
                              {"W", counts_json(i.W)},
                              {"Wp", counts_json(i.Wp)},
                              {"predicted_2si_plus", i.predicted_2si_plus},
                              {"predicted_2si_minus", i.predicted_2si_minus},
                              {"formula_holds", i.formula_holds},
                              {"index_condition", i.index_condition}});
  }
  json states = json::array();
  for (const auto& s : r.states) {
    states.push_back(json{{"frame", s.frame},
                          {"eigenvalue", s.eigenvalue},
                          {"interface_cell", s.interface_cell},
                          {"chirality", s.chirality},
                          {"mass", round12(s.mass)}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"spec",
               {{"left", {round12(r.spec.left.theta1), round12(r.spec.left.theta2)}},
                {"right", {round12(r.spec.right.theta1), round12(r.spec.right.theta2)}},
                {"interface_cell", r.spec.interface_cell},
                {"transition_width", r.spec.transition_width}}},
              {"bulk", {{"left", to_json(r.left_bulk)}, {"right", to_json(r.right_bulk)}}},
              {"interfaces", interfaces},
              {"states", states},
              {"spectrum_W", complex_list(r.spectrum_W)},
              {"spectrum_Wp", complex_list(r.spectrum_Wp)}};
}

json to_json(const PathVerdict& v) {
  json samples = json::array();
  for (const auto& s : v.samples) {
    json sv{{"t", round12(s.t)},
            {"unitarity_residual", round12(s.unitarity_residual)},
            {"min_block_sv", {round12(s.min_block_sv[0]), round12(s.min_block_sv[1]), round12(s.min_block_sv[2]),
                              round12(s.min_block_sv[3])}},
            {"five_tuple", s.tuple ? json(s.tuple->values()) : json(nullptr)}};
    if (!s.failure.empty()) sv["failure"] = s.failure;
    samples.push_back(sv);
  }
  const char* status = v.status == PathStatus::Admissible     ? "admissible"
                       : v.status == PathStatus::Inadmissible ? "inadmissible"
                                                              : "inconclusive";
  return json{{"schema_version", kSchemaVersion},
              {"status", status},
              {"admissible", v.admissible},
              {"failure_reason", v.failure_reason},
              {"t_star", v.t_star ? json(round12(*v.t_star)) : json(nullptr)},
              {"samples", samples}};
}

json to_json(const DriveabilityCertificate& c) {
  json lp = json::array();
  json rp = json::array();
  for (double p : c.left_phases) lp.push_back(round12(p));
  for (double p : c.right_phases) rp.push_back(round12(p));
  return json{{"flow_index", c.flow_index},
              {"flow_residual", round12(c.flow_residual)},
              {"decoupling_defect", round12(c.decoupling_defect)},
              {"left_phases", lp},
              {"right_phases", rp}};
}

json matrix_entries(const Matrix& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) a.push_back(json::array({round12(m(i, j).real()), round12(m(i, j).imag())}));
  return a;
}

std::string phase_csv(const std::vector<PhasePoint>& points) {
  std::string out = "theta1,theta2,indR_A,indR_B,indR_C,siR_W,siR_Wp,gapped\n";
  for (const auto& p : points) {
    out += format12(p.theta1) + "," + format12(p.theta2) + ",";
    if (p.gapped) {
      out += std::to_string(p.indR_A) + "," + std::to_string(p.indR_B) + "," + std::to_string(p.indR_C) + "," +
             std::to_string(p.siR_W) + "," + std::to_string(p.siR_Wp) + ",1\n";
    } else {
      out += ",,,,,0\n";
    }
  }
  return out;
}

}  // namespace halfstep::io
