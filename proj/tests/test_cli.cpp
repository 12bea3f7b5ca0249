#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include <trapgate/errors.hpp>

#include "config.hpp"

using namespace trapgate;
using namespace trapgate::cli;

TEST(Durations, ListAndRange) {
  EXPECT_EQ(parse_duration_list("0.3, 0.5,1"), (std::vector<double>{0.3, 0.5, 1.0}));
  const auto r = parse_duration_list("0.5:1.5:5");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r[2], 1.0);
  EXPECT_DOUBLE_EQ(r[4], 1.5);
  EXPECT_EQ(parse_duration_list("0.7:0.7:1"), std::vector<double>{0.7});
  EXPECT_THROW(parse_duration_list("1,0.5"), ConfigError);
  EXPECT_THROW(parse_duration_list("0.5,0.5"), ConfigError);
  EXPECT_THROW(parse_duration_list("-1"), ConfigError);
  EXPECT_THROW(parse_duration_list("1:2"), ConfigError);
  EXPECT_THROW(parse_duration_list("abc"), ConfigError);
}

TEST(Config, Settings) {
  ExperimentConfig c;
  apply_setting(c, "species", "Be9, Mg25");
  EXPECT_EQ(c.mass2_amu, 25.0);
  apply_setting(c, "gamma", "-pi/2");
  EXPECT_DOUBLE_EQ(*c.gamma, -pi / 2);
  apply_setting(c, "gamma", "0.5pi");
  EXPECT_DOUBLE_EQ(*c.gamma, pi / 2);
  apply_setting(c, "gamma", "auto");
  EXPECT_FALSE(c.gamma);
  apply_setting(c, "force_model", "sinusoidal");
  EXPECT_EQ(c.force_model, ForceKind::sinusoidal);
  EXPECT_THROW(apply_setting(c, "colour", "blue"), ConfigError);
  EXPECT_THROW(apply_setting(c, "grid", "100"), ConfigError);
  EXPECT_THROW(apply_setting(c, "periods", "0"), ConfigError);
  EXPECT_THROW(apply_setting(c, "negative_branch", "maybe"), ConfigError);
}

TEST(Config, LoadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "trapgate_cli_test.cfg";
  std::ofstream(path) << "# two species\nspecies = Be9,Mg25  # comment\ntf_us = 0.4:0.6:3\n\n"
                         "force_model = sinusoidal\nperiods = 4\n";
  const ExperimentConfig c = load_config(path);
  EXPECT_EQ(c.species2, "Mg25");
  EXPECT_EQ(c.tf_us.size(), 3u);
  EXPECT_EQ(c.periods, 4);
  std::ofstream(path) << "species Be9\n";
  EXPECT_THROW(load_config(path), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(Config, HashIsDeterministic) {
  ExperimentConfig a, b;
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  b.out = "elsewhere";  // output location is not part of the experiment
  EXPECT_EQ(a.hash(), b.hash());
  apply_setting(b, "tf_us", "0.6");
  EXPECT_NE(a.hash(), b.hash());
}

TEST(Config, Designs) {
  ExperimentConfig c;
  const GateDesign d = make_design(c, 0.5);
  EXPECT_NEAR(d.differential_phase(), -pi, 1e-9);
  EXPECT_TRUE(d.equal_mass());

  apply_setting(c, "species", "Mg25,Be9");
  EXPECT_THROW(make_design(c, 0.5), ConfigError);

  apply_setting(c, "species", "Be9,Mg25");
  EXPECT_FALSE(make_design(c, 0.5).equal_mass());
  try {
    make_design(c, 0.79);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::critical_time_proximity);
  }

  ExperimentConfig e;
  apply_setting(e, "c1", "-2");
  EXPECT_THROW(make_design(e, 0.5), ConfigError);
  apply_setting(e, "c2", "-2");
  EXPECT_NEAR(make_design(e, 0.5).differential_phase(), -pi, 1e-9);
}

TEST(Config, ForceModel) {
  ExperimentConfig c;
  const TwoIonSystem s(make_ions(c));
  EXPECT_EQ(make_force_model(c, s).kind, ForceKind::homogeneous);
  apply_setting(c, "force_model", "sinusoidal");
  EXPECT_NEAR(make_force_model(c, s).dk * s.ions.units().wavenumber(), 8.67e6, 0.01e6);
  apply_setting(c, "dk_per_m", "1e6");
  EXPECT_NEAR(make_force_model(c, s).dk * s.ions.units().wavenumber(), 1e6, 1e-3);
}
