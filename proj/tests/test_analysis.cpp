#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rgsc/analysis.hpp"
#include "support.hpp"

using namespace rgsc;

namespace {

const std::string kData = RGSC_SOURCE_DIR "/tests/data/";

InstanceFile small() { return read_instance(kData + "small.json"); }

SweepSpec spec(SweepParam p, const std::string& grid) {
  SweepSpec s;
  s.param = p;
  s.grid = parse_grid(grid);
  return s;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("grid parsing") {
  CHECK(parse_grid("1.0:0.5:0.25") == std::vector<double>{1.0, 0.75, 0.5});
  CHECK(parse_grid("0:1:0.5") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_grid("1,0.9,0.3") == std::vector<double>{1.0, 0.9, 0.3});
  CHECK(parse_grid("0.7") == std::vector<double>{0.7});
  CHECK(parse_grid("1.0:0.5:0.02").size() == 26);
  CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1,0.5,0.7"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1:0:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1:x:0.1"), std::invalid_argument);
}

TEST_CASE("parameter names") {
  CHECK(parse_sweep_param("cap") == SweepParam::Cap);
  CHECK(parse_sweep_param("cap-fraction") == SweepParam::Cap);
  CHECK(parse_sweep_param("demand") == SweepParam::Demand);
  CHECK(parse_sweep_param("capacity-fraction") == SweepParam::Capacity);
  CHECK_THROWS_AS(parse_sweep_param("price"), std::invalid_argument);
}

TEST_CASE("multipliers scale the intended data only") {
  const auto f = small();
  const auto cap = apply_multiplier(f.instance, f.scenarios, SweepParam::Cap, 0.5);
  CHECK(cap.instance.cap[0] == 0.5 * f.instance.cap[0]);
  CHECK(cap.scenarios == f.scenarios);
  const auto dem = apply_multiplier(f.instance, f.scenarios, SweepParam::Demand, 3.0);
  CHECK(dem.scenarios.demand.data()[0] == 3.0 * f.scenarios.demand.data()[0]);
  CHECK(dem.instance.big_m >= min_valid_big_m(dem.scenarios));
  CHECK(validate_instance(dem.instance, dem.scenarios).empty());
  const auto capy = apply_multiplier(f.instance, f.scenarios, SweepParam::Capacity, 0.4);
  CHECK(capy.instance.mfg_capacity[1] == 0.4 * f.instance.mfg_capacity[1]);
  CHECK(capy.instance.wh_capacity[0] == 0.4 * f.instance.wh_capacity[0]);
}

TEST_CASE("identity multiplier matches a plain solve") {
  const auto f = small();
  const auto r = run_sweep(f.instance, f.scenarios, spec(SweepParam::Cap, "1.0"));
  REQUIRE(r.points.size() == 1);
  const auto plain = solve_model(build_model(f.instance, f.scenarios, f.strategies));
  CHECK(r.points[0].status == to_string(plain.status));
  CHECK(r.points[0].z_total == doctest::Approx(plain.objective).epsilon(1e-12));
  CHECK_FALSE(r.first_infeasible);
}

TEST_CASE("descending cap sweep: monotone values, persistent infeasibility") {
  const auto f = small();
  const auto r = run_sweep(f.instance, f.scenarios, spec(SweepParam::Cap, "1:0:0.1"));
  REQUIRE(r.first_infeasible);
  CHECK(*r.first_infeasible > 0.0);
  CHECK(*r.first_infeasible < 1.0);
  bool infeasible = false;
  double last = -kInf;
  for (const auto& p : r.points) {
    if (p.multiplier <= *r.first_infeasible) infeasible = true;
    CHECK(p.has_solution == !infeasible);
    if (!p.has_solution) {
      CHECK(p.status == "infeasible");
      continue;
    }
    CHECK(p.z_total >= last - 1e-9 * std::abs(last));
    last = p.z_total;
  }
}

TEST_CASE("capacity sweep is non-decreasing as capacity falls") {
  const auto f = small();
  const auto r = run_sweep(f.instance, f.scenarios, spec(SweepParam::Capacity, "1:0.2:0.2"));
  double last = -kInf;
  for (const auto& p : r.points) {
    if (!p.has_solution) continue;
    CHECK(p.z_total >= last - 1e-9 * std::abs(last));
    last = p.z_total;
  }
}

TEST_CASE("zero demand leaves only the fixed charges") {
  auto f = small();
  auto s = spec(SweepParam::Demand, "0");
  s.strategies.info_sharing = true;
  const auto r = run_sweep(f.instance, f.scenarios, s);
  REQUIRE(r.points[0].has_solution);
  CHECK(r.points[0].z_total == doctest::Approx(f.instance.info_setup + f.instance.info_training));
}

TEST_CASE("results do not depend on grid order or worker count") {
  const auto f = small();
  auto a = spec(SweepParam::Cap, "1:0.2:0.2");
  auto b = spec(SweepParam::Cap, "0.2:1:0.2");
  b.jobs = 3;
  a.solver.mip_gap = b.solver.mip_gap = 0.02;
  const auto ra = run_sweep(f.instance, f.scenarios, a);
  const auto rb = run_sweep(f.instance, f.scenarios, b);
  REQUIRE(ra.points.size() == rb.points.size());
  for (std::size_t i = 0; i < ra.points.size(); ++i) {
    const auto& p = ra.points[i];
    const auto& q = rb.points[rb.points.size() - 1 - i];
    CHECK(p.multiplier == q.multiplier);
    CHECK(p.status == q.status);
    CHECK(p.z_total == q.z_total);
  }
  a.jobs = 4;
  CHECK(run_sweep(f.instance, f.scenarios, a).points == ra.points);
}

TEST_CASE("compare rejects equal configurations") {
  const auto f = small();
  CHECK_THROWS_AS(compare_strategies(f.instance, f.scenarios, {}, {}, spec(SweepParam::Cap, "1")),
                  std::invalid_argument);
}

TEST_CASE("info sharing crosses over along a demand sweep") {
  // a fixed charge against per-unit savings: dearer at low demand only
  auto f = small();
  f.instance.info_setup = 2000;
  f.instance.info_training = 1000;
  StrategyConfig a;
  a.info_sharing = true;
  auto s = spec(SweepParam::Demand, "0:1:0.25");
  const auto r = compare_strategies(f.instance, f.scenarios, a, {}, s);
  CHECK(r.winner.front() == "b");
  CHECK(r.winner.back() == "a");
  CHECK(r.verdict == "crossover");
  REQUIRE(r.crossover);
  CHECK(r.crossover->lower < r.crossover->upper);
  CHECK(r.crossover->refined_lower >= r.crossover->lower);
  CHECK(r.crossover->refined_upper <= r.crossover->upper);
  CHECK(r.crossover->refined_upper - r.crossover->refined_lower <=
        (r.crossover->upper - r.crossover->lower) / 16 + 1e-12);
  CHECK(r.crossover->refinement_a.size() <= 4);
  CHECK(compare_strategies(f.instance, f.scenarios, a, {}, s) == r);
}

TEST_CASE("nested configurations give a constant-sign verdict") {
  const auto f = small();
  StrategyConfig backup, multi;
  backup.backup_suppliers = true;
  multi.multiple_sourcing = true;
  const auto r = compare_strategies(f.instance, f.scenarios, backup, multi,
                                    spec(SweepParam::Demand, "0.5:1.5:0.5"));
  CHECK_FALSE(r.crossover);
  CHECK((r.verdict == "a-cheaper" || r.verdict == "equal"));
  for (const auto& w : r.winner) CHECK(w != "b");
}

TEST_CASE("report outputs") {
  const auto f = small();
  const auto one = run_sweep(f.instance, f.scenarios, spec(SweepParam::Cap, "1"));
  std::stringstream csv(report_csv(one));
  int data_rows = 0;
  bool header = false;
  for (std::string line; std::getline(csv, line);) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header) {
      CHECK(line == "multiplier,status,z1,z2,z_total,bound,gap,nodes,temp_open,safety_stock,shortage,seeded");
      header = true;
    } else {
      ++data_rows;
    }
  }
  CHECK(data_rows == 1);

  const auto tail = run_sweep(f.instance, f.scenarios, spec(SweepParam::Cap, "1,0.5,0"));
  const std::string svg = report_svg(tail);
  CHECK(svg.find("class=\"infeasible\"") != std::string::npos);
  CHECK(svg.find("infeasible</text>") != std::string::npos);
  CHECK(svg.find("instance_hash") != std::string::npos);

  CHECK(report_from_json(report_to_json(tail)) == tail);
  CHECK(report_from_json(Json::parse(report_to_json(tail).dump())) == tail);

  StrategyConfig a;
  a.info_sharing = true;
  const auto cmp = compare_strategies(f.instance, f.scenarios, a, {}, spec(SweepParam::Demand, "0,2"));
  CHECK(compare_from_json(Json::parse(compare_to_json(cmp).dump())) == cmp);
  CHECK(compare_csv(cmp).find("# verdict: ") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "rgsc_report_test";
  std::filesystem::remove_all(dir);
  emit_report(tail, dir);
  for (const char* name : {"report.csv", "report.json", "report.svg"})
    CHECK(std::filesystem::exists(dir / name));
  CHECK(slurp(dir / "report.csv") == report_csv(tail));
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
