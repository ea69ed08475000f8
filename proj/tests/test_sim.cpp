#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <sstream>

#include "helpers.hpp"
#include "pdrmm/metrics.hpp"
#include "pdrmm/sim.hpp"

using namespace pdrmm;

TEST_CASE("identical scenario and seed give bitwise-identical output") {
  auto scenario = testutil::exact_scenario(testutil::aligned_rect_route());
  scenario.accel_noise_std = 0.3;
  scenario.gyro_noise_std = 0.01;
  scenario.gyro_bias = deg_to_rad(0.1);
  scenario.seed = 1234;
  const auto a = simulate(scenario);
  const auto b = simulate(scenario);
  REQUIRE(a.stream.size() == b.stream.size());
  CHECK(std::memcmp(a.stream.samples.data(), b.stream.samples.data(),
                    a.stream.size() * sizeof(ImuSample)) == 0);
  REQUIRE(a.truth.size() == b.truth.size());
  CHECK(std::memcmp(a.truth.data(), b.truth.data(),
                    a.truth.size() * sizeof(TrackPoint)) == 0);

  scenario.seed = 1235;
  const auto c = simulate(scenario);
  CHECK(std::memcmp(a.stream.samples.data(), c.stream.samples.data(),
                    a.stream.size() * sizeof(ImuSample)) != 0);
}

TEST_CASE("truth points lie exactly on the route polyline") {
  auto scenario = testutil::exact_scenario(testutil::perimeter125_route());
  scenario.accel_noise_std = 0.2;
  scenario.gyro_noise_std = 0.01;
  const auto sim = simulate(scenario);
  const Polyline path = traversal(scenario.route);
  for (const auto& p : sim.truth)
    CHECK(point_to_path_distance({p.x, p.y}, path) < 1e-9);
}

TEST_CASE("noise-free accel magnitude has one peak per step") {
  const auto scenario = testutil::exact_scenario(testutil::aligned_rect_route());
  const auto sim = simulate(scenario);
  const auto mag = accel_magnitude(sim.stream);
  std::size_t peaks = 0;
  for (std::size_t i = 1; i + 1 < mag.size(); ++i)
    if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) ++peaks;
  CHECK(peaks == sim.truth.size() - 1);
}

TEST_CASE("125 m rectangle at 0.7 m per step walks 178 steps past 3 corners") {
  const auto scenario = testutil::exact_scenario(testutil::perimeter125_route());
  const auto sim = simulate(scenario);
  CHECK(sim.truth.size() - 1 == 178);  // floor(125 / 0.7)
  CHECK(sim.turn_schedule.size() == 3);
  CHECK(route_length(scenario.route) == Catch::Approx(125.0).margin(0.01));
}

TEST_CASE("zero-noise walk is self-consistent under PDR") {
  const auto scenario = testutil::exact_scenario(testutil::aligned_rect_route());
  const auto sim = simulate(scenario);
  const auto traj = run_pdr(sim.stream, testutil::pdr_config_for(sim, scenario));
  REQUIRE(traj.step_count() == sim.truth.size() - 1);
  for (std::size_t j = 0; j < sim.turn_schedule.size(); ++j) {
    const auto& p = traj.points[sim.turn_schedule[j] - 1];
    const auto& c = scenario.route.corners[j + 1];
    CHECK(std::hypot(p.x - c.x, p.y - c.y) < 1e-3);
  }
}

TEST_CASE("gyro bias produces exactly bias-times-duration heading drift") {
  auto scenario = testutil::exact_scenario(testutil::straight_route(126.0));
  scenario.gyro_bias = deg_to_rad(0.5);
  const auto sim = simulate(scenario);
  const auto traj = run_pdr(sim.stream, testutil::pdr_config_for(sim, scenario));
  REQUIRE(traj.step_count() == 180);
  const double t_final = 180 / 2.0;  // cadence 2 Hz
  const double expected = deg_to_rad(0.5) * t_final;
  CHECK(std::abs(traj.points.back().phi - sim.true_initial_heading - expected) <
        deg_to_rad(0.1));
}

TEST_CASE("routes shorter than one step are rejected") {
  auto scenario = testutil::exact_scenario(
      RouteMap{{{0.0, 0.0}, {0.5, 0.0}}, false});
  CHECK_THROWS_AS(simulate(scenario), ConfigError);
}

TEST_CASE("invalid scenario parameters are rejected") {
  auto scenario = testutil::exact_scenario(testutil::aligned_rect_route());
  scenario.cadence_hz = 0.0;
  CHECK_THROWS_AS(validate_scenario(scenario), ConfigError);
  scenario = testutil::exact_scenario(testutil::aligned_rect_route());
  scenario.gyro_noise_std = -1.0;
  CHECK_THROWS_AS(validate_scenario(scenario), ConfigError);
}

TEST_CASE("scenario JSON must name a route") {
  const auto j = nlohmann::json::parse(R"({"cadence_hz": 2.0})");
  try {
    scenario_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("route") != std::string::npos);
  }
}

TEST_CASE("scenario JSON round-trips") {
  auto scenario = testutil::exact_scenario(testutil::aligned_rect_route());
  scenario.gyro_bias = deg_to_rad(0.1);
  scenario.initial_heading_bias = deg_to_rad(15.0);
  scenario.accel_noise_std = 0.3;
  scenario.seed = 99;
  const auto restored = scenario_from_json(scenario_to_json(scenario));
  CHECK(restored.route.corners.size() == scenario.route.corners.size());
  CHECK(restored.route.closed == scenario.route.closed);
  CHECK(restored.gyro_bias == scenario.gyro_bias);
  CHECK(restored.initial_heading_bias == scenario.initial_heading_bias);
  CHECK(restored.accel_noise_std == scenario.accel_noise_std);
  CHECK(restored.seed == scenario.seed);
  CHECK(restored.turn_transition_s == scenario.turn_transition_s);
}
