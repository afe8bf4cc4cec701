#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "qbat/verify.hpp"

using namespace qbat;
using Catch::Approx;

TEST_CASE("config parsing") {
  SECTION("full round trip") {
    ExperimentConfig cfg = parse_config_text(
        "# comment\n"
        "experiment = fraction\n"
        "n_sites = 6, 8\n"
        "charger_k = 2\n"
        "battery_axis = Z\n"
        "t_min = 0\n"
        "t_max = 1.5\n"
        "t_points = 31\n"
        "m_min = 1\n"
        "m_max = 4\n"
        "seed = 42\n"
        "workers = 2\n");
    REQUIRE(cfg.experiment == ExperimentKind::Fraction);
    REQUIRE(cfg.n_list == std::vector<int>{6, 8});
    REQUIRE(cfg.k_list == std::vector<int>{2});
    REQUIRE(cfg.axis == Axis::Z);
    REQUIRE(cfg.t_grid.t_max == Approx(1.5));
    REQUIRE(cfg.t_grid.n_points == 31);
    REQUIRE(cfg.m_max == 4);
    REQUIRE(cfg.seed == 42);
    REQUIRE(cfg.workers == 2);
  }
  SECTION("unknown keys carry a line number") {
    try {
      parse_config_text("n_sites = 4\nbogus = 1\n");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
      REQUIRE(std::string(e.what()).find("bogus") != std::string::npos);
    }
  }
  SECTION("malformed values rejected") {
    REQUIRE_THROWS_AS(parse_config_text("n_sites = four\n"), ValidationError);
    REQUIRE_THROWS_AS(parse_config_text("experiment = nope\n"), ValidationError);
    REQUIRE_THROWS_AS(parse_config_text("just a line\n"), ValidationError);
  }
}

TEST_CASE("result table serialization") {
  ResultTable t;
  t.columns = {"a", "b", "c"};
  t.add_row({std::int64_t{1}, 2.5, std::string("x,y")});
  t.metadata.emplace_back("source", "unit");
  std::string csv = t.to_csv();
  REQUIRE(csv.find("# source = unit\n") != std::string::npos);
  REQUIRE(csv.find("a,b,c\n") != std::string::npos);
  REQUIRE(csv.find("1,2.5,\"x,y\"\n") != std::string::npos);

  auto j = nlohmann::json::parse(t.to_json());
  REQUIRE(j["columns"].size() == 3);
  REQUIRE(j["rows"][0][1] == 2.5);
  REQUIRE(j["metadata"]["source"] == "unit");

  REQUIRE_THROWS_AS(t.add_row({std::int64_t{1}}), ValidationError);
}

static ExperimentConfig small_sweep() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::WorkSweep;
  cfg.n_list = {6};
  cfg.k_list = {2, 4};
  cfg.axis = Axis::X;
  cfg.t_grid = TGrid{0, std::numbers::pi, 21};
  return cfg;
}

TEST_CASE("work sweep table") {
  ResultTable t = run_work_sweep(small_sweep());
  REQUIRE(t.columns.size() == 8);
  REQUIRE(t.rows.size() == 2 * 21);
  for (const auto& row : t.rows) {
    auto k = std::get<std::int64_t>(row[1]);
    double tval = std::get<double>(row[3]);
    double w = std::get<double>(row[4]);
    if (tval == 0.0) REQUIRE(w == Approx(0.0).margin(1e-12));
    if (k == 2) {
      // in-law rows carry a consistent closed-form column
      double cf = std::get<double>(row[6]);
      double err = std::get<double>(row[7]);
      REQUIRE(err == Approx(std::abs(w - cf)).margin(1e-15));
      REQUIRE(err < 1e-9);
    } else {
      // K = K_max rows leave the closed form blank
      REQUIRE(std::get<std::string>(row[6]).empty());
    }
  }
}

TEST_CASE("work sweep determinism") {
  ResultTable a = run_work_sweep(small_sweep());
  ResultTable b = run_work_sweep(small_sweep());
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.columns.size(); ++j)
      REQUIRE(ResultTable::cell_str(a.rows[i][j]) ==
              ResultTable::cell_str(b.rows[i][j]));
}

TEST_CASE("k sweep table") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::KSweep;
  cfg.n_list = {8};
  cfg.k_list = {2, 4};
  cfg.axis = Axis::X;
  ResultTable t = run_k_sweep(cfg);
  REQUIRE(t.rows.size() == 2);
  for (const auto& row : t.rows)
    REQUIRE(std::get<double>(row[5]) < 1e-6);  // sim vs Gamma form
}

TEST_CASE("average power table with N fit") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::AvgPower;
  cfg.n_list = {4, 6, 8};
  cfg.k_list = {2};
  cfg.axis = Axis::Z;
  cfg.grid_points = 2001;
  ResultTable t = run_avg_power(cfg);
  REQUIRE(t.rows.size() == 4);  // 3 values + fit row
  const auto& fit = t.rows.back();
  REQUIRE(std::get<std::string>(fit[0]) == "fit_N");
  REQUIRE(std::get<double>(fit[6]) == Approx(1.0).margin(0.01));
}

TEST_CASE("fraction table") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Fraction;
  cfg.n_list = {5};
  cfg.k_list = {2};
  cfg.axis = Axis::Z;
  cfg.fraction_grid = 65;
  ResultTable t = run_fraction(cfg);
  REQUIRE(t.rows.size() == 5);
  const auto& last = t.rows.back();
  REQUIRE(std::get<std::int64_t>(last[3]) == 5);  // m = N
  REQUIRE(std::get<double>(last[5]) == Approx(1.0).margin(1e-9));
}

TEST_CASE("verification runner") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Verify;
  cfg.n_cap = 6;
  cfg.seed = 9;

  SECTION("subset selection") {
    cfg.checks = {"pauli_dense", "special_y32"};
    ResultTable t = run_verify(cfg);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(verify_passed(t));
  }
  SECTION("unknown subset is a validation error") {
    cfg.checks = {"nonexistent"};
    REQUIRE_THROWS_AS(run_verify(cfg), ValidationError);
  }
  SECTION("negative control: injected sign flip is caught") {
    cfg.checks = {"generator_algebra"};
    cfg.inject_fault = true;
    ResultTable t = run_verify(cfg);
    REQUIRE_FALSE(verify_passed(t));
  }
  SECTION("expected discrepancies are not failures") {
    cfg.checks = {"special_x42_printed_formula",
                  "average_work_printed_constant"};
    ResultTable t = run_verify(cfg);
    REQUIRE(verify_passed(t));
    for (const auto& row : t.rows)
      REQUIRE(std::get<std::string>(row[1]) == "expected_discrepancy");
  }
}

TEST_CASE("worker fan-out matches serial execution") {
  ExperimentConfig serial = small_sweep();
  ExperimentConfig parallel = small_sweep();
  serial.workers = 1;
  parallel.workers = 4;
  ResultTable a = run_work_sweep(serial);
  ResultTable b = run_work_sweep(parallel);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    REQUIRE(std::get<double>(a.rows[i][4]) == std::get<double>(b.rows[i][4]));
}
