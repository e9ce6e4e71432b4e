#include <cstdlib>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dmqfi/io.hpp"
#include "dmqfi/sweep.hpp"

using namespace dmqfi;

namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.axis1 = {Param::T, 0.5, 1.0, 2};
  s.axis2 = {Param::D, 0.0, 1.0, 2};
  s.fixed = {-1.0, 0.0, 0.0, 0.0, 0.7, 2};
  s.label = "small";
  return s;
}

SweepSpec shrink(SweepSpec s, int count) {
  s.axis1.count = count;
  s.axis2.count = count;
  return s;
}

std::string csv(const SweepTable& t) {
  std::ostringstream out;
  write_csv(t, out);
  return out.str();
}

}  // namespace

TEST(Param, RoundTrip) {
  for (Param p : {Param::T, Param::B, Param::b, Param::D, Param::J}) EXPECT_EQ(parse_param(to_string(p)), p);
  EXPECT_EQ(parse_param("b"), Param::b);
  EXPECT_EQ(parse_param("B"), Param::B);
  EXPECT_THROW(parse_param("d"), std::invalid_argument);
  EXPECT_THROW(parse_param("N"), std::invalid_argument);
}

TEST(Param, GetSet) {
  ModelParams m;
  set(m, Param::b, 0.25);
  set(m, Param::J, 2.0);
  EXPECT_EQ(m.b, 0.25);
  EXPECT_EQ(get(m, Param::J), 2.0);
  EXPECT_EQ(m.B, 0.0);
}

TEST(AxisSpec, InclusiveUniformGrid) {
  const AxisSpec a{Param::T, 0.05, 3.0, 64};
  EXPECT_EQ(a.value(0), 0.05);
  EXPECT_EQ(a.value(63), 3.0);
  EXPECT_NEAR(a.value(1) - a.value(0), (3.0 - 0.05) / 63.0, 1e-15);
}

TEST(RunSweep, CellsEqualSinglePointCalls) {
  const SweepSpec spec = small_spec();
  const SweepTable t = run_sweep(spec, 1);
  ASSERT_EQ(t.rows.size(), 4u);
  const double ts[] = {0.5, 1.0}, ds[] = {0.0, 1.0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const SweepRow& row = t.rows[static_cast<std::size_t>(2 * i + j)];
      const QfiResult r = qfi({-1.0, 0.0, 0.0, ds[j], ts[i], 2});
      EXPECT_EQ(row.axis1, ts[i]);
      EXPECT_EQ(row.axis2, ds[j]);
      EXPECT_EQ(row.qfi, r.qfi_per_particle);
      EXPECT_EQ(row.c_max, r.c_max);
      EXPECT_EQ(row.useful, r.useful());
    }
  }
  EXPECT_EQ(t.version, std::string(kVersion));
}

TEST(RunSweep, WorkerCountDoesNotChangeOutput) {
  const SweepSpec spec = shrink(preset("fig1_TD", Sign::ferro), 12);
  const std::string serial = csv(run_sweep(spec, 1));
  for (unsigned w : {2u, 4u, 8u, 0u}) EXPECT_EQ(csv(run_sweep(spec, w)), serial);
  EXPECT_EQ(csv(run_sweep(spec, 1)), serial);
}

TEST(RunSweep, MoreWorkersThanCells) {
  EXPECT_EQ(run_sweep(small_spec(), 16).rows.size(), 4u);
}

TEST(RunSweep, FailingCellIsIdentified) {
  // b = 1e200 passes parameter validation but overflows gamma^2.
  SweepSpec s = small_spec();
  s.axis2 = {Param::b, 0.0, 1e200, 2};
  for (unsigned workers : {1u, 3u}) {
    try {
      run_sweep(s, workers);
      ADD_FAILURE() << "expected SweepError";
    } catch (const SweepError& e) {
      EXPECT_EQ(e.index1, 0);
      EXPECT_EQ(e.index2, 1);
      EXPECT_NE(std::string(e.what()).find("T=0.5"), std::string::npos) << e.what();
    }
  }
}

TEST(SweepSpec, Validation) {
  SweepSpec s = small_spec();
  s.axis2.param = Param::T;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.axis1.count = 1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.axis2.max = s.axis2.min;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.axis1.min = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.fixed.N = 1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.axis1 = {Param::B, 0.0, 1.0, 2};
  s.fixed.T = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(run_sweep(s, 1), std::invalid_argument);
}

TEST(Preset, FixedParametersFollowCaptions) {
  struct Row {
    const char* name;
    Param axis1, axis2;
    double B, b, D, T;  // NaN marks an axis parameter
  };
  const double axis = std::nan("");
  const Row table[] = {
      {"fig1_TD", Param::T, Param::D, 0.0, 0.0, axis, axis},
      {"fig1_TB", Param::T, Param::B, axis, 0.0, 0.0, axis},
      {"fig1_Tb", Param::T, Param::b, 0.0, axis, 0.0, axis},
      {"fig2_Db", Param::D, Param::b, 0.0, axis, axis, 0.7},
      {"fig2_bB", Param::b, Param::B, axis, axis, 0.0, 0.7},
  };
  ASSERT_EQ(preset_names().size(), std::size(table));
  for (const Row& r : table) {
    for (Sign sign : {Sign::ferro, Sign::antiferro}) {
      const SweepSpec s = preset(r.name, sign);
      SCOPED_TRACE(s.label);
      EXPECT_EQ(s.axis1.param, r.axis1);
      EXPECT_EQ(s.axis2.param, r.axis2);
      EXPECT_EQ(s.fixed.J, sign == Sign::ferro ? -1.0 : 1.0);
      EXPECT_EQ(s.fixed.N, 2);
      const std::pair<Param, double> fixed[] = {{Param::B, r.B}, {Param::b, r.b}, {Param::D, r.D}, {Param::T, r.T}};
      for (const auto& [param, value] : fixed) {
        if (!std::isnan(value)) EXPECT_EQ(get(s.fixed, param), value) << to_string(param);
      }
      EXPECT_EQ(s.axis1.count, kDefaultAxisCount);
      EXPECT_EQ(s.axis2.count, kDefaultAxisCount);
      EXPECT_NO_THROW(s.validate());
    }
  }
  EXPECT_EQ(preset("fig1_TD", Sign::ferro).axis1.min, kDefaultTMin);
  EXPECT_EQ(preset("fig1_TD", Sign::ferro).axis2.max, kDefaultFieldMax);
  EXPECT_EQ(preset("fig2_bB", Sign::antiferro).label, "fig2_bB/antiferro");
}

TEST(Preset, UnknownNames) {
  EXPECT_THROW(preset("fig3", Sign::ferro), std::invalid_argument);
  EXPECT_THROW(parse_sign("ferromagnetic"), std::invalid_argument);
  EXPECT_EQ(parse_sign("antiferro"), Sign::antiferro);
  EXPECT_EQ(coupling(Sign::ferro), -1.0);
}

TEST(Preset, OnlyFerromagneticPanelSurpassesShotNoise) {
  const SweepTable ferro = run_sweep(preset("fig2_Db", Sign::ferro));
  const SweepTable anti = run_sweep(preset("fig2_Db", Sign::antiferro));
  bool any_useful = false;
  for (const SweepRow& row : ferro.rows) any_useful |= row.qfi > 1.0;
  EXPECT_TRUE(any_useful);
  for (const SweepRow& row : anti.rows) EXPECT_LE(row.qfi, 1.0 + 1e-9) << row.axis1 << "," << row.axis2;
}

TEST(Preset, FerromagneticDbPanelIsSymmetric) {
  const SweepSpec spec = preset("fig2_Db", Sign::ferro);
  const SweepTable t = run_sweep(spec);
  const int n = spec.axis1.count;
  ASSERT_EQ(spec.axis2.count, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      EXPECT_NEAR(t.rows[static_cast<std::size_t>(i * n + j)].qfi, t.rows[static_cast<std::size_t>(j * n + i)].qfi, 1e-10);
}

TEST(Csv, HeaderRowsAndRoundTrip) {
  const SweepTable t = run_sweep(small_spec(), 1);
  const std::string text = csv(t);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "T,D,qfi,c_max,useful");
  for (const SweepRow& row : t.rows) {
    ASSERT_TRUE(std::getline(in, line));
    std::istringstream fields(line);
    std::string a1, a2, q, c, u;
    std::getline(fields, a1, ',');
    std::getline(fields, a2, ',');
    std::getline(fields, q, ',');
    std::getline(fields, c, ',');
    std::getline(fields, u, ',');
    EXPECT_EQ(std::strtod(a1.c_str(), nullptr), row.axis1);
    EXPECT_EQ(std::strtod(a2.c_str(), nullptr), row.axis2);
    EXPECT_EQ(std::strtod(q.c_str(), nullptr), row.qfi);
    EXPECT_EQ(std::strtod(c.c_str(), nullptr), row.c_max);
    EXPECT_EQ(u, row.useful ? "1" : "0");
  }
  EXPECT_FALSE(std::getline(in, line));
  EXPECT_EQ(text.back(), '\n');
}

TEST(Csv, SeventeenDigitFormatting) {
  for (double x : {0.1, 1.0 / 3.0, 2.0, 1e-300, -0.0, 6.02214076e23}) {
    EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Json, Schema) {
  const SweepTable t = run_sweep(small_spec(), 1);
  const nlohmann::ordered_json j = to_json(t);
  ASSERT_TRUE(j.contains("metadata"));
  ASSERT_TRUE(j.contains("rows"));
  const auto& m = j["metadata"];
  EXPECT_EQ(m["label"], "small");
  EXPECT_EQ(m["version"], std::string(kVersion));
  EXPECT_EQ(m["axis1"]["param"], "T");
  EXPECT_EQ(m["axis2"]["count"], 2);
  EXPECT_EQ(m["row_count"], 4);
  EXPECT_FALSE(m["fixed"].contains("T"));
  EXPECT_FALSE(m["fixed"].contains("D"));
  EXPECT_EQ(m["fixed"]["J"], -1.0);
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["rows"][3]["T"].get<double>(), 1.0);
  EXPECT_EQ(j["rows"][3]["qfi"].get<double>(), t.rows[3].qfi);
  EXPECT_TRUE(j["rows"][3]["useful"].is_boolean());
  // Re-parsing the dump is lossless.
  const auto back = nlohmann::json::parse(j.dump());
  EXPECT_EQ(back["rows"][2]["c_max"].get<double>(), t.rows[2].c_max);
}
