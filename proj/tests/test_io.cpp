#include "doctest.h"

#include "sepfix/criteria.hpp"
#include "sepfix/errors.hpp"
#include "sepfix/report.hpp"
#include "sepfix/state_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sepfix;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sepfix_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("state json layout is row-major [re, im] pairs") {
  const json j = state_to_json(werner(1.0));
  CHECK(j["dims"] == json::array({2, 2}));
  REQUIRE(j["matrix"].size() == 16);
  // Singlet: <01|rho|10> = -1/2 is entry (1, 2) of the composite matrix.
  CHECK(j["matrix"][1 * 4 + 2][0].get<double>() == doctest::Approx(-0.5));
  CHECK(j["matrix"][1 * 4 + 1][0].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("state files round-trip bit-exactly") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DensityMatrix rho = random_full_rank({2, 3}, seed);
    const auto path = scratch("rt.json");
    save_state(path, rho);
    const DensityMatrix back = load_state(path);
    CHECK(back.dims() == rho.dims());
    CHECK(back.matrix() == rho.matrix());
  }
}

TEST_CASE("malformed state files are rejected") {
  CHECK_THROWS_AS(state_from_json(json::array()), ValidationError);
  CHECK_THROWS_AS(state_from_json(json{{"dims", {2}}, {"matrix", json::array()}}),
                  ValidationError);
  CHECK_THROWS_AS(state_from_json(json{{"dims", {1, 1}}, {"matrix", {{1.0, 0.0}, {0.0, 0.0}}}}),
                  ValidationError);
  CHECK_THROWS_AS(state_from_json(json{{"dims", {1, 1}}, {"matrix", {{0.5, 0.0}}}}),
                  ValidationError);
  CHECK_THROWS_AS(state_from_json(json{{"dims", {1, 1}}, {"matrix", {"x"}}}), ValidationError);
  const auto path = scratch("garbage.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_state(path), ValidationError);
  CHECK_THROWS_AS(load_state(scratch("missing.json")), IoError);
  CHECK_THROWS_AS(save_state("/nonexistent-dir/x.json", bell()), IoError);
}

TEST_CASE("csv trace writer") {
  std::ostringstream os;
  CsvTraceWriter w(os);
  w({0, 0.5, 0.0, 6.0, 0.01});
  w({1, 0.25, 1.5, 6.0, 0.01});
  CHECK(os.str() ==
        "step,residual_l1,x_norm_l1,lambda,noise_floor\n"
        "0,0.5,0,6,0.01\n"
        "1,0.25,1.5,6,0.01\n");
  // 17 significant digits survive a text round trip.
  const double third = 1.0 / 3.0;
  const std::string line = format_trace_row({2, third, third, third, third});
  CHECK(std::stod(line.substr(2, line.find(',', 2) - 2)) == third);
}

TEST_CASE("run reports round-trip through json") {
  SolverConfig cfg;
  cfg.sample_count = 5000;
  cfg.threads = 1;
  const RunResult r = run(werner(0.1), cfg);
  const RunReport rep = make_report("w.json", cfg, r, false, 0.125);
  CHECK(rep.outcome == "separable_within_kappa");
  CHECK(rep.config.lambda == r.lambda);
  CHECK_FALSE(rep.params.has_value());
  CHECK(report_from_json(json::parse(to_json(rep).dump())) == rep);

  RunReport with_params = rep;
  with_params.params = params::paper_params(2, 0.1);
  CHECK(report_from_json(json::parse(to_json(with_params).dump())) == with_params);
  CHECK(to_json(*with_params.params)["K"] == 1280);
}
