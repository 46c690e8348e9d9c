#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "nucseg/geometry.hpp"
#include "support.hpp"

using namespace nucseg;

namespace {

constexpr double kPi = std::numbers::pi;

// Solid-angle fractions of the Voronoi cells by plain Monte Carlo over
// uniformly random directions.
std::vector<double> mc_fractions(const Spacing &sp, std::size_t samples, std::uint64_t seed) {
  std::vector<std::array<double, 3>> dir;
  for (const auto &o : kAllOffsets) {
    const double x = o[0] * sp.x, y = o[1] * sp.y, z = o[2] * sp.z;
    const double n = std::sqrt(x * x + y * y + z * z);
    dir.push_back({x / n, y / n, z / n});
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> hits(dir.size(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = g(rng), y = g(rng), z = g(rng);
    std::size_t best = 0;
    double best_dot = -1e300;
    for (std::size_t k = 0; k < dir.size(); ++k) {
      const double d = x * dir[k][0] + y * dir[k][1] + z * dir[k][2];
      if (d > best_dot) {
        best_dot = d;
        best = k;
      }
    }
    hits[best] += 1;
  }
  for (auto &h : hits) h /= static_cast<double>(samples);
  return hits;
}

std::size_t offset_index(int dx, int dy, int dz) {
  for (std::size_t k = 0; k < kAllOffsets.size(); ++k) {
    if (kAllOffsets[k] == std::array<int, 3>{dx, dy, dz}) return k;
  }
  return kAllOffsets.size();
}

double ball_area(double r) {
  const auto b = testing::ball(r);
  return surface_area(b.component, cut_metric_weights(Spacing{}), b.mask.extent());
}

}  // namespace

TEST_CASE("6-neighborhood weights on an isotropic grid") {
  const auto w = cut_metric_weights(kFaceOffsets, Spacing{}, 200000);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(w.solid_angle[k] == doctest::Approx(4 * kPi / 6).epsilon(1e-3));
    CHECK(w[k] == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
  }
}

TEST_CASE("26-neighborhood fractions match a Monte Carlo oracle") {
  for (const Spacing sp : {Spacing{1, 1, 1}, Spacing{1, 1, 5}, Spacing{0.5, 1, 2}}) {
    const auto w = cut_metric_weights(sp);
    const auto oracle = mc_fractions(sp, 2000000, 1);
    double sum = 0;
    for (std::size_t k = 0; k < kAllOffsets.size(); ++k) {
      const double f = w.solid_angle[k] / (4 * kPi);
      sum += f;
      CHECK(std::abs(f - oracle[k]) < 1e-3);
      CHECK(w[k] > 0);
      const auto &o = kAllOffsets[k];
      CHECK(w.solid_angle[k] == w.solid_angle[offset_index(-o[0], -o[1], -o[2])]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("a long z step shrinks the z cell") {
  const auto iso = cut_metric_weights(Spacing{1, 1, 1});
  const auto aniso = cut_metric_weights(Spacing{1, 1, 5});
  const auto z = offset_index(0, 0, 1);
  CHECK(aniso.solid_angle[z] < iso.solid_angle[z]);
}

TEST_CASE("volume") {
  Component c;
  c.voxels.resize(100);
  CHECK(volume_of(c, {1, 1, 5}) == 500);
  c.voxels.resize(1);
  CHECK(volume_of(c, {}) == 1);
}

TEST_CASE("single voxels all have the same area") {
  const auto w = cut_metric_weights(Spacing{});
  Mask m({5, 5, 5}, {}, 0);
  m(2, 2, 2) = 1;
  const auto a = surface_area(testing::only_component(m), w, m.extent());
  CHECK(a == doctest::Approx(w.total()));
  Mask corner({5, 5, 5}, {}, 0);
  corner(0, 0, 0) = 1;  // the volume border counts as outside
  CHECK(surface_area(testing::only_component(corner), w, corner.extent()) == doctest::Approx(a));
}

TEST_CASE("ball of radius 15: area and sphericity") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = testing::ball(15);
  const auto w = cut_metric_weights(Spacing{});
  const double area = surface_area(b.component, w, b.mask.extent());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::abs(area - 4 * kPi * 225) / (4 * kPi * 225) < 0.05);
  CHECK(secs < 1.0);
  const double psi = sphericity(b.component, w, b.mask.extent());
  CHECK(psi >= 0.95);
  CHECK(psi <= 1.03);
}

TEST_CASE("cube sphericity") {
  const auto c = testing::cube(20);
  const double psi = sphericity(c.component, cut_metric_weights(Spacing{}), c.mask.extent());
  CHECK(std::abs(psi - std::cbrt(kPi / 6)) <= 0.05);
}

TEST_CASE("ball area error stays small as the radius grows") {
  // Digitization noise makes the error wobble from radius to radius, so the
  // larger balls are compared against the worst of the smaller ones.
  double small = 0;
  for (double r : {8.0, 12.0}) small = std::max(small, std::abs(ball_area(r) / (4 * kPi * r * r) - 1));
  for (double r : {16.0, 20.0}) {
    const double err = std::abs(ball_area(r) / (4 * kPi * r * r) - 1);
    CHECK(err <= small + 1e-9);
    CHECK(err < 0.02);
  }
}

TEST_CASE("axis-aligned box faces read close to their area") {
  Mask m({40, 30, 24}, {}, 0);
  for (std::size_t z = 2; z < 20; ++z)
    for (std::size_t y = 2; y < 27; ++y)
      for (std::size_t x = 2; x < 36; ++x) m(x, y, z) = 1;
  const double exact = 2.0 * (34 * 25 + 34 * 18 + 25 * 18);
  const double a = surface_area(testing::only_component(m), cut_metric_weights(Spacing{}), m.extent());
  CHECK(std::abs(a / exact - 1) < 0.04);
}

TEST_CASE("anisotropic ball keeps its area") {
  const Spacing sp{1, 1, 3};
  const auto b = testing::ball(15, sp);
  const double area = surface_area(b.component, cut_metric_weights(sp), b.mask.extent());
  CHECK(std::abs(area - 4 * kPi * 225) / (4 * kPi * 225) < 0.08);
}

TEST_CASE("area is translation and axis-permutation invariant") {
  // A box with distinct side lengths, placed at two offsets and transposed.
  auto box = [](std::array<std::size_t, 3> lo, std::array<std::size_t, 3> len) {
    Mask m({30, 30, 30}, {}, 0);
    for (std::size_t z = lo[2]; z < lo[2] + len[2]; ++z)
      for (std::size_t y = lo[1]; y < lo[1] + len[1]; ++y)
        for (std::size_t x = lo[0]; x < lo[0] + len[0]; ++x) m(x, y, z) = 1;
    return surface_area(testing::only_component(m), cut_metric_weights(Spacing{}), m.extent());
  };
  const double a = box({2, 2, 2}, {5, 9, 13});
  CHECK(box({11, 7, 3}, {5, 9, 13}) == doctest::Approx(a));
  CHECK(box({2, 2, 2}, {13, 5, 9}) == doctest::Approx(a).epsilon(1e-3));
  CHECK(box({2, 2, 2}, {9, 13, 5}) == doctest::Approx(a).epsilon(1e-3));
}

TEST_CASE("ellipsoid voxel count") {
  Mask m({31, 31, 15}, {}, 0);
  for (std::size_t z = 0; z < 15; ++z)
    for (std::size_t y = 0; y < 31; ++y)
      for (std::size_t x = 0; x < 31; ++x) {
        const double dx = (x - 15.0) / 10, dy = (y - 15.0) / 10, dz = (z - 7.0) / 4;
        if (dx * dx + dy * dy + dz * dz <= 1) m(x, y, z) = 1;
      }
  const double v = volume_of(testing::only_component(m), {});
  CHECK(std::abs(v - 4.0 / 3 * kPi * 400) / (4.0 / 3 * kPi * 400) < 0.03);
}

TEST_CASE("fused balls are less spherical than one ball") {
  const auto w = cut_metric_weights(Spacing{});
  const auto one = testing::ball(10);
  const double psi_one = sphericity(one.component, w, one.mask.extent());
  // Centers 17 voxels apart: the balls overlap by 3 voxels.
  Mask m({48, 26, 26}, {}, 0);
  for (std::size_t z = 0; z < 26; ++z)
    for (std::size_t y = 0; y < 26; ++y)
      for (std::size_t x = 0; x < 48; ++x) {
        const double dy = y - 13.0, dz = z - 13.0, d1 = x - 12.0, d2 = x - 29.0;
        if (d1 * d1 + dy * dy + dz * dz <= 100 || d2 * d2 + dy * dy + dz * dz <= 100) m(x, y, z) = 1;
      }
  const double psi_two = sphericity(testing::only_component(m), w, m.extent());
  CHECK(psi_one - psi_two >= 0.05);
}

TEST_CASE("sphericity of random blobs stays below 1.05") {
  // Unions of a few random balls, large enough that the metric is meaningful.
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (const Spacing sp : {Spacing{1, 1, 1}, Spacing{1, 1, 3}}) {
    const auto w = cut_metric_weights(sp);
    for (int trial = 0; trial < 20; ++trial) {
      const Extent e{40, 40, sp.z > 1 ? std::size_t{16} : std::size_t{40}};
      Mask m(e, sp, 0);
      const int balls = 1 + static_cast<int>(rng() % 4);
      for (int b = 0; b < balls; ++b) {
        const double r = 4 + 5 * u(rng);
        const double cx = 12 + 16 * u(rng), cy = 12 + 16 * u(rng), cz = (e.z * sp.z) * (0.3 + 0.4 * u(rng));
        for (std::size_t z = 0; z < e.z; ++z)
          for (std::size_t y = 0; y < e.y; ++y)
            for (std::size_t x = 0; x < e.x; ++x) {
              const double dx = x - cx, dy = y - cy, dz = z * sp.z - cz;
              if (dx * dx + dy * dy + dz * dz <= r * r) m(x, y, z) = 1;
            }
      }
      for (const auto &c : connected_components(m)) {
        if (c.size() >= 200) CHECK(sphericity(c, w, m.extent()) <= 1.05);
      }
    }
  }
  CHECK_THROWS_AS((void)sphericity(10.0, 0.0), InvalidArgument);
}
