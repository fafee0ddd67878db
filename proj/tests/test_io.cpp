#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "trustrpl/config_io.hpp"
#include "trustrpl/csv.hpp"
#include "trustrpl/experiments.hpp"
#include "trustrpl/output.hpp"

using namespace trustrpl;
using nlohmann::json;

namespace {

std::string config_error_message(const json& doc) {
  try {
    (void)config::from_json(doc);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  sim::ScenarioConfig c;
  c.seed = 99;
  c.n_epochs = 33;
  c.trust.b = 120.0;
  c.marl.epsilon = 0.35;
  c.environment = behavior::EnvironmentProfile::preset(behavior::Environment::HighMalicious);
  c.dio_neighbors = 0;
  c.rejoin_probability = 0.0;
  CHECK(config::from_json(config::to_json(c)) == c);
  CHECK(config::from_json(json::object()) == sim::ScenarioConfig{});
}

TEST_CASE("environment accepts a name or an object") {
  const auto by_name = config::from_json(json{{"environment", "low_malicious"}});
  CHECK(by_name.environment.name == behavior::Environment::LowMalicious);
  const auto by_obj = config::from_json(
      json{{"environment", {{"name", "medium_malicious"}, {"malicious_fraction", 0.41}}}});
  CHECK(by_obj.environment.malicious_fraction == 0.41);
  CHECK(config_error_message(json{{"environment", "extreme"}}).find("environment") !=
        std::string::npos);
}

TEST_CASE("strict config parsing names the offending field") {
  CHECK(config_error_message(json{{"n_epoch", 3}}).find("unknown key 'n_epoch'") !=
        std::string::npos);
  CHECK(config_error_message(json{{"trust", {{"D", 1.0}}}}).find("trust.D") != std::string::npos);
  CHECK(config_error_message(json{{"n_epochs", "ten"}}).find("n_epochs") != std::string::npos);
  CHECK(config_error_message(json{{"seed", -1}}).find("seed") != std::string::npos);
  CHECK(config_error_message(json{{"marl", {{"epsilon", 1.5}}}}).find("epsilon") !=
        std::string::npos);
  CHECK(config_error_message(json::array()).find("object") != std::string::npos);
}

TEST_CASE("config digest ignores the seed only") {
  sim::ScenarioConfig a;
  sim::ScenarioConfig b = a;
  b.seed = 12345;
  CHECK(config::config_digest(a) == config::config_digest(b));
  CHECK(config::config_digest(a).size() == 16);
  b.trust.c = 0.6;
  CHECK(config::config_digest(a) != config::config_digest(b));
}

TEST_CASE("load_config reports the path") {
  const auto missing = std::filesystem::temp_directory_path() / "trustrpl_missing_config.json";
  std::filesystem::remove(missing);
  try {
    (void)config::load_config(missing);
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).find("trustrpl_missing_config.json") != std::string::npos);
  }

  const auto bad = std::filesystem::temp_directory_path() / "trustrpl_bad_config.json";
  std::ofstream(bad) << "{\"n_epochs\": 4,";
  CHECK_THROWS_AS((void)config::load_config(bad), Error);
  std::ofstream(bad) << "{\"n_epochs\": 4}";
  CHECK(config::load_config(bad).n_epochs == 4);
  std::filesystem::remove(bad);
}

TEST_CASE("csv number formatting is exact") {
  for (double v : {0.0, 1.0, -1.0, 0.1, 1.0 / 3.0, 1e-300, 5.9631746038627153484e-29,
                   std::numeric_limits<double>::max(), 0.7697106226417058}) {
    CHECK(csv::parse_double(csv::format_double(v)) == v);
  }
  CHECK(csv::format_double(0.5) == "0.5");
  CHECK(csv::format_double(12.0) == "12");
  CHECK_THROWS_AS(csv::parse_double("abc"), Error);
  CHECK_THROWS_AS(csv::parse_double("1.5x"), Error);
}

TEST_CASE("csv quoting round-trips") {
  csv::Table t;
  t.header = {"a", "b"};
  t.add_row({"plain", "with,comma"});
  t.add_row({"with \"quote\"", "line\nbreak"});
  t.add_row({"", "3;4;5"});
  const auto text = csv::to_string(t);
  CHECK(csv::parse(text) == t);
  CHECK(text.find('\r') == std::string::npos);
  CHECK_THROWS_AS(t.add_row({"only one"}), Error);
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS((void)t.column("c"), Error);
}

TEST_CASE("output tables carry the digest and seed and round-trip") {
  sim::ScenarioConfig c;
  c.n_epochs = 6;
  c.seed = 4;
  const auto r = sim::run_scenario(c);
  const auto digest = config::config_digest(c);

  for (const auto& table : {output::metadata_table(r, c), output::epochs_table(r),
                            output::trust_series_table(r), output::action_distribution_table(r)}) {
    REQUIRE(table.header.size() >= 2);
    CHECK(table.header[0] == "config_digest");
    CHECK(table.header[1] == "seed");
    for (const auto& row : table.rows) {
      CHECK(row[0] == digest);
      CHECK(row[1] == "4");
    }
    CHECK(csv::parse(csv::to_string(table)) == table);
  }

  const auto epochs = output::epochs_table(r);
  CHECK(epochs.rows.size() == 6);
  const auto ret = epochs.column("return");
  for (std::size_t i = 0; i < epochs.rows.size(); ++i) {
    CHECK(std::stoi(epochs.rows[i][ret]) == r.epochs[i].return_value);
  }

  const auto dist = output::action_distribution_table(r);
  const auto prop = dist.column("proportion");
  const auto kind = dist.column("kind");
  double total = 0.0;
  for (const auto& row : dist.rows) {
    if (row[kind] == "decision") total += csv::parse_double(row[prop]);
  }
  CHECK(total == doctest::Approx(1.0));

  const auto dir = std::filesystem::temp_directory_path() / "trustrpl_bundle_test";
  std::filesystem::remove_all(dir);
  output::write_bundle(dir, r, c);
  CHECK(csv::read(dir / "epochs.csv") == epochs);
  for (const char* name : {"metadata.csv", "trust_series.csv", "action_distribution.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep parameters") {
  using experiments::SweepParam;
  CHECK(experiments::parse_sweep_param("epsilon") == SweepParam::Epsilon);
  CHECK(experiments::parse_sweep_param("B") == SweepParam::B);
  CHECK_THROWS_AS(experiments::parse_sweep_param("gamma"), Error);

  const sim::ScenarioConfig base;
  CHECK(experiments::apply(base, SweepParam::Epsilon, "0.1").marl.epsilon == 0.1);
  CHECK(experiments::apply(base, SweepParam::C, "0.3").trust.c == 0.3);
  CHECK(experiments::apply(base, SweepParam::Environment, "high_malicious").environment.name ==
        behavior::Environment::HighMalicious);
  CHECK_THROWS_AS(experiments::apply(base, SweepParam::B, "lots"), Error);
  CHECK_THROWS_AS(experiments::apply(base, SweepParam::Epsilon, "2"), Error);

  auto small = base;
  small.n_epochs = 5;
  const auto rows = experiments::sweep(small, SweepParam::Epsilon, {"0", "1"}, 2, 0, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n_seeds == 2);
  CHECK(rows[0].retain_mean + rows[0].modify_mean == doctest::Approx(5.0));
  CHECK(rows[0].config_digest != rows[1].config_digest);
  const auto table = experiments::sweep_summary_table(rows, SweepParam::Epsilon, small.seed);
  CHECK(table.rows.size() == 2);
  CHECK(table.rows[0][table.column("parameter")] == "epsilon");
}

TEST_CASE("parallel seeds match serial runs") {
  sim::ScenarioConfig c;
  c.n_epochs = 4;
  c.seed = 70;
  const auto par = experiments::run_seeds(c, 3, 3);
  REQUIRE(par.size() == 3);
  for (int i = 0; i < 3; ++i) {
    auto single = c;
    single.seed = c.seed + static_cast<std::uint64_t>(i);
    CHECK(par[static_cast<std::size_t>(i)] == sim::run_scenario(single));
  }
}

TEST_CASE("figure datasets") {
  using experiments::Figure;
  CHECK_THROWS_AS(experiments::parse_figure("fig99"), Error);
  sim::ScenarioConfig c;
  c.n_epochs = 5;

  const auto curves = experiments::figure_data(Figure::TrustCurves, c, 2, 1);
  CHECK(curves.rows.size() == 30);

  const auto dist = experiments::figure_data(Figure::DecisionDistribution, c, 2, 1);
  const auto y = dist.column("y");
  double total = 0.0;
  for (const auto& row : dist.rows) total += csv::parse_double(row[y]);
  CHECK(dist.rows.size() == 4);
  CHECK(total == doctest::Approx(1.0));

  const auto ig = experiments::ig_curve_table(c, experiments::SweepParam::B, {"50", "150"});
  CHECK(ig.rows.size() == 2 * 101);
  CHECK(ig.rows.front()[ig.column("series")] == "B=50");
}

TEST_CASE("class trust curves order honest above selfish above malicious") {
  sim::ScenarioConfig c;
  c.seed = 3;
  const auto curves = experiments::class_trust_curves(c, 10);
  for (const auto& series : curves) {
    REQUIRE(series.size() == 10);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i] <= series[i - 1]);
  }
  CHECK(curves[static_cast<int>(NodeClass::Honest)].back() >
        curves[static_cast<int>(NodeClass::Selfish)].back());
  CHECK(curves[static_cast<int>(NodeClass::Selfish)].back() >
        curves[static_cast<int>(NodeClass::Malicious)].back());
}
