#include "holoris/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace holoris;

namespace {

std::string config_dir() { return HOLORIS_CONFIG_DIR; }

// Returns the reported field path, or "" if parsing succeeded.
std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsAndPowerConversion) {
  const auto c = parse_config("{}");
  EXPECT_NEAR(10.0 * std::log10(c.noise_power_w() * 1e3), -96.99, 0.005);
  EXPECT_NEAR(c.tx_power_w(), 1e-4, 1e-18);
  EXPECT_EQ(c.optimizer.power_budget, c.tx_power_w());
  EXPECT_EQ(c.optimizer.noise_power, c.noise_power_w());
  EXPECT_EQ(c.trials_for(1.0), 50);
  EXPECT_EQ(c.trials_for(1e5), 1);
  EXPECT_EQ(c.schemes.size(), 4u);
  const auto g = c.base_geometry();
  EXPECT_DOUBLE_EQ(g.ris_offset(), 7.5);
  EXPECT_EQ(g.ris().size(), 2500u);
  EXPECT_EQ(g.tx().size(), 64u);
}

TEST(Config, DbmConversion) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(-10.0), 1e-4, 1e-19);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"fig2_rate_vs_n.json", "fig3_dof_vs_distance.json", "fig4_modes.json",
                           "fig5_dof_vs_ris_position.json"}) {
    EXPECT_NO_THROW(load_config(config_dir() + "/" + name)) << name;
  }
  const auto fig2 = load_config(config_dir() + "/fig2_rate_vs_n.json");
  EXPECT_EQ(fig2.sweep.variable, SweepVariable::RisSize);
  EXPECT_EQ(fig2.geometry_at(50).ris().size(), 2500u);
  const auto fig3 = load_config(config_dir() + "/fig3_dof_vs_distance.json");
  EXPECT_DOUBLE_EQ(fig3.geometry_at(100).ris_offset(), 50.0);
  const auto fig5 = load_config(config_dir() + "/fig5_dof_vs_ris_position.json");
  EXPECT_DOUBLE_EQ(fig5.geometry_at(2.5).ris_offset(), 2.5);
  EXPECT_DOUBLE_EQ(fig5.geometry_at(2.5).wall_distance(), 10.0);
}

TEST(Config, UnknownKeysReportTheirPath) {
  EXPECT_EQ(error_path(R"({"bogus": 1})"), "bogus");
  EXPECT_EQ(error_path(R"({"geometry": {"tx": {"count_q": 3}}})"), "geometry.tx.count_q");
  EXPECT_EQ(error_path(R"({"channel": {"k": [1]}})"), "channel.k");
}

TEST(Config, TypeAndRangeErrorsReportTheirPath) {
  EXPECT_EQ(error_path(R"({"geometry": {"wall_distance_m": "far"}})"), "geometry.wall_distance_m");
  EXPECT_EQ(error_path(R"({"geometry": {"ris_offset_m": 20}})"), "geometry.ris_offset_m");
  EXPECT_EQ(error_path(R"({"geometry": {"ris_offset_m": 0}})"), "geometry.ris_offset_m");
  EXPECT_EQ(error_path(R"({"geometry": {"ris_offset_m": 3, "ris_offset_fraction": 0.2}})"),
            "geometry.ris_offset_m");
  EXPECT_EQ(error_path(R"({"channel": {"rician_k": [1, -2]}})"), "channel.rician_k[1]");
  EXPECT_EQ(error_path(R"({"channel": {"direct_pathloss_exponent": 1.5}})"), "channel.direct_pathloss_exponent");
  EXPECT_EQ(error_path(R"({"schemes": ["perfect_csi", "oracle"]})"), "schemes[1]");
  EXPECT_EQ(error_path(R"({"sweep": {"variable": "height", "values": [1]}})"), "sweep.variable");
  EXPECT_EQ(error_path(R"({"sweep": {"variable": "ris_offset", "values": [1, 15]}})"), "sweep.values[1]");
  EXPECT_EQ(error_path(R"({"sweep": {"variable": "ris_size", "values": [2.5]}})"), "sweep.values[0]");
  EXPECT_EQ(error_path(R"({"optimizer": {"contraction_q": 2}})"), "optimizer");
  EXPECT_EQ(error_path(R"({"modes": {"scheme": "best"}})"), "modes.scheme");
  EXPECT_EQ(error_path("{not json"), "<root>");
  EXPECT_EQ(error_path(R"({"channel": {"rician_k": [1], "trials": 3}})"), "");
}

TEST(Config, OffsetFractionFollowsWallDistance) {
  const auto c = parse_config(R"({"geometry": {"ris_offset_fraction": 0.25},
                                  "sweep": {"variable": "wall_distance", "values": [4, 40]}})");
  EXPECT_DOUBLE_EQ(c.geometry_at(40).ris_offset(), 10.0);
  EXPECT_DOUBLE_EQ(c.geometry_at(4).ris_offset(), 1.0);
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/holoris.json"), ConfigError);
}
