#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "halfstep/errors.hpp"
#include "halfstep/spec_io.hpp"

using namespace halfstep;
using io::json;

namespace {

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const SpecError& e) {
    return e.field();
  }
  return "<no error>";
}

json ring16() { return json{{"x_min", -8}, {"x_max", 7}, {"cell_dim", 2}, {"topology", "Ring"}}; }

}  // namespace

TEST(Rounding, TwelveSignificantDigits) {
  EXPECT_EQ(io::format12(0.1 + 0.2), "0.3");
  EXPECT_EQ(io::format12(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format12(-1e-20), "-1e-20");
  EXPECT_EQ(io::format12(-0.0), "0");
  EXPECT_DOUBLE_EQ(io::round12(2.0000000000004), 2.0);
}

TEST(Chain, RoundTrip) {
  const CellChain c = io::parse_chain(ring16());
  EXPECT_EQ(c.x_min(), -8);
  EXPECT_EQ(c.x_max(), 7);
  EXPECT_TRUE(c.is_ring());
  EXPECT_EQ(io::to_json(c), ring16());
  const CellChain l = io::parse_chain(json{{"x_min", 0}, {"x_max", 9}, {"topology", "Line"}});
  EXPECT_FALSE(l.is_ring());
  EXPECT_EQ(l.cell_dim(), 2);
}

TEST(Chain, ErrorsNameTheField) {
  EXPECT_EQ(field_of([] { io::parse_chain(json{{"x_max", 3}}); }), "/chain/x_min");
  EXPECT_EQ(field_of([] { io::parse_chain(json{{"x_min", 0.5}, {"x_max", 3}}); }), "/chain/x_min");
  EXPECT_EQ(field_of([] { io::parse_chain(json{{"x_min", 0}, {"x_max", 3}, {"topology", "Torus"}}); }),
            "/chain/topology");
  EXPECT_EQ(field_of([] { io::parse_chain(json{{"x_min", 3}, {"x_max", 0}}); }), "/chain");
  EXPECT_EQ(field_of([] { io::parse_chain(json::array()); }), "/chain");
}

TEST(Builders, KnownTypesBuild) {
  const CellChain c = io::parse_chain(ring16());
  const json specs[] = {
      {{"type", "shift"}, {"component", 1}, {"power", -1}},
      {{"type", "splitstep"}, {"theta1", 0.0}, {"theta2", 1.5707963267948966}},
      {{"type", "splitstep"}, {"crossover", {{"left", {-1.5707963267948966, 0}}, {"right", {1.5707963267948966, 0}}}}},
      {{"type", "generating_example"}, {"params", {1, 0, 0, 0, 0}}},
      {{"type", "named"}, {"name", "F2"}},
      {{"type", "shift_content"}, {"a", 0}, {"b", 0}, {"c", 0}},
      {{"type", "phase_bridge"}, {"t", 0.25}},
      {{"type", "reference"}},
  };
  for (const json& s : specs) EXPECT_NO_THROW(io::make_builder(s)(c)) << s.dump();
}

TEST(Builders, ErrorsNameTheField) {
  EXPECT_EQ(field_of([] { io::make_builder(json{{"type", "teleport"}}); }), "/builder/type");
  EXPECT_EQ(field_of([] { io::make_builder(json{{"type", "splitstep"}, {"theta1", 0}}); }), "/builder/theta2");
  EXPECT_EQ(field_of([] { io::make_builder(json{{"type", "named"}, {"name", "F9"}}); }), "/builder/name");
  EXPECT_EQ(field_of([] { io::make_builder(json{{"type", "generating_example"}, {"params", {1, 2}}}); }),
            "/builder/params");
  EXPECT_EQ(field_of([] { io::make_builder(json{{"type", "shift"}, {"grading", {1, 1}}})(io::parse_chain(ring16())); }),
            "/builder/grading");
}

TEST(Builders, DenseEntriesAreNotRebuildable) {
  json entries = json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) entries.push_back({i == j ? 1.0 : 0.0, 0.0});
  const json spec{{"chain", {{"x_min", 0}, {"x_max", 1}, {"cell_dim", 2}}},
                  {"builder", {{"type", "dense_entries"}, {"entries", entries}}}};
  const io::OperatorSpec s = io::parse_operator_spec(spec);
  EXPECT_FALSE(s.rebuildable);
  EXPECT_LT((io::build_operator(s).matrix() - Matrix::Identity(4, 4)).norm(), 1e-15);

  json bad = spec;
  bad["builder"]["entries"][5] = "x";
  EXPECT_EQ(field_of([&] { io::build_operator(io::parse_operator_spec(bad)); }), "/builder/entries/5");
  bad["builder"]["entries"].erase(0);
  EXPECT_EQ(field_of([&] { io::build_operator(io::parse_operator_spec(bad)); }), "/builder/entries");
}

TEST(PathSpecs, Interpolations) {
  const json chain = ring16();
  const PathSpec phase = io::parse_path_spec(json{{"chain", chain}, {"interpolation", "phase"}, {"samples", 5}});
  EXPECT_EQ(phase.samples.size(), 5u);
  EXPECT_TRUE(static_cast<bool>(phase.generator));

  const json custom{{"chain", chain},
                    {"interpolation", "samples"},
                    {"custom",
                     {{{"t", 0.0}, {"builder", {{"type", "named"}, {"name", "F1"}}}},
                      {{"t", 1.0}, {"builder", {{"type", "named"}, {"name", "F3"}}}}}}};
  const PathSpec p = io::parse_path_spec(custom);
  EXPECT_EQ(p.samples.size(), 2u);
  EXPECT_FALSE(static_cast<bool>(p.generator));

  EXPECT_EQ(field_of([&] { io::parse_path_spec(json{{"chain", chain}, {"interpolation", "spline"}}); }),
            "/interpolation");
  EXPECT_EQ(field_of([&] { io::parse_path_spec(json{{"chain", chain}, {"interpolation", "phase"}, {"samples", 1}}); }),
            "/samples");
  json short_custom = custom;
  short_custom["custom"].erase(1);
  EXPECT_EQ(field_of([&] { io::parse_path_spec(short_custom); }), "/custom");
}

TEST(Output, ReportCarriesSchemaVersion) {
  const CellChain c = io::parse_chain(ring16());
  const json r = io::to_json(full_report(io::make_builder(json{{"type", "named"}, {"name", "F1"}})(c)));
  EXPECT_EQ(r.at("schema_version"), io::kSchemaVersion);
  EXPECT_EQ(r.at("five_tuple"), (json{{"ind_A", 0}, {"ind_B", 0}, {"indR_A", -1}, {"indR_B", -1}, {"indR_C", 0}}));
  EXPECT_EQ(r.at("derived").at("siR"), 0);
}

TEST(Output, PhaseCsvRows) {
  PhasePoint g;
  g.theta1 = 0.1 + 0.2;
  g.theta2 = -1.0 / 3.0;
  g.gapped = true;
  g.indR_A = -1;
  g.indR_B = -1;
  g.siR_W = 0;
  g.siR_Wp = 1;
  PhasePoint closed;
  const std::string csv = io::phase_csv({g, closed});
  std::istringstream in(csv);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header, "theta1,theta2,indR_A,indR_B,indR_C,siR_W,siR_Wp,gapped");
  EXPECT_EQ(row1, "0.3,-0.333333333333,-1,-1,0,0,1,1");
  EXPECT_EQ(row2, "0,0,,,,,,0");
}
