#include <doctest.h>

#include <random>

#include "nucseg/histogram.hpp"
#include "support.hpp"

using namespace nucseg;

namespace {

std::vector<std::uint64_t> spikes(std::size_t a, std::uint64_t na, std::size_t b, std::uint64_t nb) {
  std::vector<std::uint64_t> c(std::max(a, b) + 1, 0);
  c[a] += na;
  c[b] += nb;
  return c;
}

}  // namespace

TEST_CASE("histogram counts and frequencies") {
  const std::vector<std::uint16_t> samples{0, 3, 3, 5};
  const auto h = Histogram::of<std::uint16_t>(samples);
  CHECK(h.max_level() == 5);
  CHECK(h.total() == 4);
  CHECK(h[3] == 2);
  CHECK(h.frequency(3) == doctest::Approx(0.5));
  CHECK(h.occupied_levels() == 3);
  CHECK_THROWS_AS(Histogram(std::vector<std::uint64_t>(4, 0)), DataError);
}

TEST_CASE("otsu separates two spikes") {
  for (auto [na, nb] : {std::pair{500, 500}, std::pair{900, 100}}) {
    const Histogram h(spikes(10, na, 200, nb));
    const int t = otsu_threshold(h);
    CHECK(t >= 10);
    CHECK(t < 200);
    // Every split between the spikes has the same variance; ties go low.
    CHECK(t == 10);
  }
}

TEST_CASE("otsu rejects single-level histograms") {
  CHECK_THROWS_AS((void)otsu_threshold(Histogram(spikes(7, 10, 7, 10))), DataError);
}

TEST_CASE("otsu equals the exhaustive argmax on random histograms") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t levels = 2 + rng() % 63;
    std::vector<std::uint64_t> c(levels);
    for (auto &v : c) v = rng() % 4 == 0 ? 0 : rng() % 100;
    c[rng() % levels] += 1;
    c[rng() % levels] += 1;
    const Histogram h(c);
    if (h.occupied_levels() < 2) continue;
    REQUIRE(otsu_threshold(h) == testing::brute_force_otsu(c));
  }
}

TEST_CASE("otsu ties resolve to the smaller level") {
  // Symmetric three-spike histogram: splitting on either side of the middle
  // spike gives the same variance.
  std::vector<std::uint64_t> c(21, 0);
  c[0] = 10;
  c[10] = 5;
  c[20] = 10;
  const Histogram h(c);
  CHECK(otsu_threshold(h) == testing::brute_force_otsu(c));
  CHECK(otsu_threshold(h) == 0);
}

TEST_CASE("isodata init on two equal spikes") {
  const Histogram h(spikes(10, 500, 200, 500));
  const auto m = iterative_threshold_init(h);
  CHECK(m.mu_b == doctest::Approx(10));
  CHECK(m.mu_f == doctest::Approx(200));
  CHECK(m.p_b == doctest::Approx(0.5));
  CHECK(m.p_f == doctest::Approx(0.5));
  CHECK(m.sigma_b == 1.0);
  CHECK(m.sigma_f == 1.0);
  CHECK(m.alpha == 0.01);
}

TEST_CASE("isodata threshold is a fixpoint of the class-mean midpoint") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    HistogramModel m;
    m.mu_b = 30 + rng() % 40;
    m.sigma_b = 5;
    m.mu_f = m.mu_b + 60 + rng() % 80;
    m.sigma_f = 10;
    m.p_f = 0.3;
    m.p_b = 0.7;
    m.alpha = 0;
    const auto h = testing::sample_histogram(m, 20000, rng);
    const double t = isodata_threshold(h);
    double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (std::size_t i = 0; i < h.counts().size(); ++i) {
      const double c = static_cast<double>(h[i]);
      if (static_cast<double>(i) <= t) {
        n0 += c;
        s0 += c * i;
      } else {
        n1 += c;
        s1 += c * i;
      }
    }
    CHECK(s0 / n0 < t);
    CHECK(s1 / n1 > t);
    // The midpoint falls in the same gap between occupied levels as t.
    const double mid = 0.5 * (s0 / n0 + s1 / n1);
    CHECK(std::floor(mid) == std::floor(t));
  }
}

TEST_CASE("isodata rejects degenerate histograms") {
  CHECK_THROWS_AS((void)iterative_threshold_init(Histogram(spikes(4, 9, 4, 9))), DataError);
}
