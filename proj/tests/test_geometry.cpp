#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "pdrmm/geometry.hpp"

using namespace pdrmm;

TEST_CASE("path_length sums consecutive segment lengths") {
  CHECK(path_length({{{0, 0}, {3, 0}, {3, 4}}}) == 7.0);
}

TEST_CASE("path_length of a two-vertex polyline is the endpoint distance") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Vec2 a{testutil::uniform(rng, -100, 100), testutil::uniform(rng, -100, 100)};
    Vec2 b{testutil::uniform(rng, -100, 100), testutil::uniform(rng, -100, 100)};
    CHECK(path_length({{a, b}}) == distance(a, b));
  }
}

TEST_CASE("path_length matches a brute-force re-summation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Polyline p;
    const int n = 2 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i)
      p.vertices.push_back({testutil::uniform(rng, -50, 50),
                            testutil::uniform(rng, -50, 50)});
    long double expected = 0.0L;
    for (std::size_t i = 1; i < p.vertices.size(); ++i) {
      const long double dx = p.vertices[i].x - p.vertices[i - 1].x;
      const long double dy = p.vertices[i].y - p.vertices[i - 1].y;
      expected += std::sqrt(dx * dx + dy * dy);
    }
    CHECK(std::abs(path_length(p) - static_cast<double>(expected)) < 1e-9);
  }
}

TEST_CASE("path_length is invariant under rigid transforms") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Polyline p;
    for (int i = 0; i < 8; ++i)
      p.vertices.push_back({testutil::uniform(rng, -50, 50),
                            testutil::uniform(rng, -50, 50)});
    const double angle = testutil::uniform(rng, -kPi, kPi);
    const Vec2 shift{testutil::uniform(rng, -100, 100),
                     testutil::uniform(rng, -100, 100)};
    Polyline q;
    for (const auto& v : p.vertices)
      q.vertices.push_back({v.x * std::cos(angle) - v.y * std::sin(angle) + shift.x,
                            v.x * std::sin(angle) + v.y * std::cos(angle) + shift.y});
    CHECK(std::abs(path_length(p) - path_length(q)) < 1e-9);
  }
}

TEST_CASE("point on a vertex has zero path distance") {
  const Polyline p{{{1, 2}, {4, 2}, {4, 7}}};
  CHECK(point_to_path_distance({4, 2}, p) == 0.0);
}

TEST_CASE("perpendicular drop onto a segment interior") {
  CHECK(point_to_path_distance({1, 1}, {{{0, 0}, {2, 0}}}) == 1.0);
}

TEST_CASE("point_to_path_distance matches a dense-sampling oracle") {
  std::mt19937_64 rng(14);
  constexpr int kSamplesPerSegment = 100000;
  for (int trial = 0; trial < 10; ++trial) {
    Polyline p;
    for (int i = 0; i < 4; ++i)
      p.vertices.push_back({testutil::uniform(rng, -20, 20),
                            testutil::uniform(rng, -20, 20)});
    const Vec2 q{testutil::uniform(rng, -30, 30), testutil::uniform(rng, -30, 30)};

    double dense = std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < p.vertices.size(); ++s) {
      const Vec2 a = p.vertices[s - 1];
      const Vec2 b = p.vertices[s];
      for (int j = 0; j <= kSamplesPerSegment; ++j) {
        const double t = static_cast<double>(j) / kSamplesPerSegment;
        dense = std::min(dense, distance(q, a + t * (b - a)));
      }
    }
    const double fast = point_to_path_distance(q, p);
    CHECK(fast <= dense + 1e-12);
    CHECK(dense - fast < 1e-4);
  }
}

TEST_CASE("path distance never exceeds the distance to any vertex") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    Polyline p;
    for (int i = 0; i < 5; ++i)
      p.vertices.push_back({testutil::uniform(rng, -20, 20),
                            testutil::uniform(rng, -20, 20)});
    const Vec2 q{testutil::uniform(rng, -40, 40), testutil::uniform(rng, -40, 40)};
    const double d = point_to_path_distance(q, p);
    for (const auto& v : p.vertices) CHECK(d <= distance(q, v) + 1e-12);
  }
}

TEST_CASE("polylines need at least two vertices") {
  CHECK_THROWS_AS(path_length({{{1, 1}}}), ConfigError);
  CHECK_THROWS_AS(point_to_path_distance({0, 0}, {{}}), ConfigError);
}

TEST_CASE("wrap_pi maps into (-pi, pi]") {
  CHECK(wrap_pi(kPi) == kPi);
  CHECK(wrap_pi(-kPi) == kPi);
  CHECK(wrap_pi(3 * kPi) == Catch::Approx(kPi));
  CHECK(std::abs(wrap_pi(2 * kPi)) < 1e-15);
  std::mt19937_64 rng(16);
  for (int i = 0; i < 100; ++i) {
    const double a = testutil::uniform(rng, -50, 50);
    const double w = wrap_pi(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::remainder(a - w, 2 * kPi)) < 1e-12);
  }
}
