#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "nucseg/histmodel.hpp"
#include "support.hpp"

using namespace nucseg;

namespace {

HistogramModel symmetric_pair() {
  HistogramModel m;
  m.p_b = m.p_f = 0.5;
  m.mu_b = 50;
  m.mu_f = 150;
  m.sigma_b = m.sigma_f = 10;
  m.alpha = 0;
  return m;
}

double gauss(double p, double mu, double s, double i) {
  return p / (std::sqrt(2 * std::numbers::pi) * s) * std::exp(-(i - mu) * (i - mu) / (2 * s * s));
}

}  // namespace

TEST_CASE("model validation") {
  HistogramModel m = symmetric_pair();
  CHECK_NOTHROW(m.validate());
  m.mu_f = 40;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = symmetric_pair();
  m.sigma_b = 0;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = symmetric_pair();
  m.p_b = 0.9;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("model_eval terms") {
  HistogramModel m;
  m.p_b = 0.7;
  m.mu_b = 40;
  m.sigma_b = 6;
  m.p_f = 0.25;
  m.mu_f = 170;
  m.sigma_f = 12;
  m.alpha = 0.03;

  const auto at_mu_b = model_eval(m, m.mu_b);
  CHECK(at_mu_b.nb == doctest::Approx(m.p_b / (std::sqrt(2 * std::numbers::pi) * m.sigma_b)));
  CHECK(at_mu_b.ib == 0.0);

  // Just below mu_f the log term vanishes.
  CHECK(model_eval(m, m.mu_f - 1e-9).ib == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(model_eval(m, m.mu_f).ib == 0.0);
  // IB starts exactly at mu_b + 2 sigma_b.
  CHECK(model_eval(m, m.mu_b + 2 * m.sigma_b - 1e-9).ib == 0.0);
  CHECK(model_eval(m, m.mu_b + 2 * m.sigma_b).ib > 0.0);

  for (double i : {60.0, 95.5, 130.0}) {
    const auto t = model_eval(m, i);
    const double d = i - m.mu_b;
    const double ib = 2 * m.alpha * m.p_f / d * std::log((m.mu_f - m.mu_b) / d);
    CHECK(t.nb == doctest::Approx(gauss(m.p_b, m.mu_b, m.sigma_b, i)));
    CHECK(t.f == doctest::Approx(gauss(m.p_f, m.mu_f, m.sigma_f, i)));
    CHECK(t.ib == doctest::Approx(ib));
    CHECK(t.total() == doctest::Approx(t.nb + t.ib + t.f));
  }
  CHECK_THROWS_AS((void)model_eval(m, -1.0), InvalidArgument);
  CHECK_THROWS_AS((void)model_eval(m, 300.0, 255.0), InvalidArgument);
}

TEST_CASE("illumination term vanishes when 2 sigma_b spans the gap") {
  HistogramModel m = symmetric_pair();
  m.sigma_b = 60;
  m.alpha = 0.5;
  for (int i = 0; i < 200; ++i) CHECK(model_eval(m, i).ib == 0.0);
}

TEST_CASE("IB mass over the truncated range is alpha p_f log(eps)^2") {
  HistogramModel m;
  m.mu_b = 20;
  m.sigma_b = 3;
  m.mu_f = 220;
  m.p_f = 0.2;
  m.alpha = 0.02;
  const double lo = m.mu_b + 2 * m.sigma_b;
  double mass = 0;
  const int steps = 2000000;
  const double dx = (m.mu_f - lo) / steps;
  for (int k = 0; k < steps; ++k) mass += model_eval(m, lo + (k + 0.5) * dx).ib * dx;
  const double eps = 2 * m.sigma_b / (m.mu_f - m.mu_b);
  CHECK(mass == doctest::Approx(m.alpha * m.p_f * std::log(eps) * std::log(eps)).epsilon(1e-4));
}

TEST_CASE("model threshold") {
  CHECK(model_threshold(symmetric_pair()) == 100);

  // More background mass pushes the threshold up.
  int previous = 0;
  for (double pb : {0.3, 0.5, 0.7, 0.9, 0.99}) {
    HistogramModel m = symmetric_pair();
    m.p_b = pb;
    m.p_f = 1 - pb;
    const int t = model_threshold(m);
    CHECK(t >= previous);
    previous = t;
  }

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testing::random_model(rng);
    int expected = -1;
    for (int i = static_cast<int>(std::floor(m.mu_b)) + 1; i <= m.mu_f; ++i) {
      const auto t = model_eval(m, i);
      if (t.f >= t.nb + t.ib) {
        expected = i;
        break;
      }
    }
    CHECK(model_threshold(m) == expected);
  }
}

TEST_CASE("model threshold fails when the foreground never wins") {
  HistogramModel m = symmetric_pair();
  m.p_b = 0.9999;
  m.p_f = 0.0001;
  m.sigma_f = 1;
  m.mu_f = 52;
  m.mu_b = 50;
  m.sigma_b = 40;
  CHECK_THROWS_AS((void)model_threshold(m), FitError);
}

TEST_CASE("background posterior") {
  HistogramModel m = symmetric_pair();
  m.alpha = 0.005;
  CHECK(background_posterior(m, m.mu_b) == doctest::Approx(1.0));
  CHECK(background_posterior(m, m.mu_f) < 1e-6);
  CHECK(background_posterior(m, 400) == kPosteriorFloor);
  for (double i : {70.0, 100.0, 120.0}) {
    const auto t = model_eval(m, i);
    CHECK(background_posterior(m, i) == doctest::Approx(t.background() / t.total()));
  }
  double previous = 1.0;
  for (int i = 50; i <= 150; ++i) {
    const double p = background_posterior(m, i);
    CHECK(p <= previous + 1e-12);
    previous = p;
  }
}

TEST_CASE("json round trip uses the seven parameter names") {
  HistogramModel m;
  m.p_b = 0.6;
  m.mu_b = 12.5;
  m.sigma_b = 2;
  m.p_f = 0.4;
  m.mu_f = 99;
  m.sigma_f = 7;
  m.alpha = 0.02;
  const nlohmann::json j = m;
  for (const char *key : {"p_b", "mu_b", "sigma_b", "p_f", "mu_f", "sigma_f", "alpha"}) {
    CHECK(j.contains(key));
  }
  const auto back = j.get<HistogramModel>();
  CHECK(back.mu_f == 99);
  CHECK(back.alpha == 0.02);
}

TEST_CASE("EM recovers the documented example") {
  HistogramModel truth;
  truth.mu_b = 20;
  truth.sigma_b = 5;
  truth.mu_f = 180;
  truth.sigma_f = 15;
  truth.p_f = 0.1;
  truth.alpha = 0.02;
  std::mt19937_64 rng(99);
  const auto h = testing::sample_histogram(truth, 1000000, rng);
  const auto fit = em_fit(h, iterative_threshold_init(h));
  CHECK(std::abs(fit.mu_b - truth.mu_b) <= 2.0);
  CHECK(std::abs(fit.mu_f - truth.mu_f) <= 2.0);
}

TEST_CASE("EM on two separated Gaussians recovers the background mass") {
  HistogramModel truth = symmetric_pair();
  truth.p_b = 0.8;
  truth.p_f = 0.2;
  truth.mu_f = 200;
  std::mt19937_64 rng(4);
  const auto h = testing::sample_histogram(truth, 400000, rng);
  const auto fit = em_fit(h, iterative_threshold_init(h));
  CHECK(std::abs(fit.p_b - 0.8) < 0.02);
  CHECK(std::abs(fit.sigma_b - 10) < 0.5);
  CHECK(std::abs(fit.sigma_f - 10) < 0.5);
}

TEST_CASE("EM leaves a fixpoint alone") {
  HistogramModel truth = symmetric_pair();
  truth.mu_f = 250;
  std::mt19937_64 rng(8);
  const auto h = testing::sample_histogram(truth, 200000, rng);
  EmOptions opt;
  opt.fit_alpha = false;
  auto start = truth;
  start.alpha = 0;
  const auto first = em_fit(h, start, opt);
  const auto again = em_fit_detailed(h, first, opt);
  CHECK(again.iterations <= 2);
  CHECK(again.model.mu_b == doctest::Approx(first.mu_b).epsilon(1e-3));
  CHECK(again.model.mu_f == doctest::Approx(first.mu_f).epsilon(1e-3));
  CHECK(again.model.sigma_b == doctest::Approx(first.sigma_b).epsilon(1e-3));
}

TEST_CASE("EM log-likelihood of the two-Gaussian part never decreases") {
  std::mt19937_64 rng(31);
  EmOptions opt;
  opt.fit_alpha = false;
  for (int trial = 0; trial < 10; ++trial) {
    auto truth = testing::random_model(rng);
    truth.alpha = 0;
    truth.p_b = 1 - truth.p_f;
    const auto h = testing::sample_histogram(truth, 100000, rng);
    auto init = iterative_threshold_init(h);
    init.alpha = 0;
    const auto fit = em_fit_detailed(h, init, opt);
    for (std::size_t k = 1; k < fit.log_likelihood.size(); ++k) {
      CHECK(fit.log_likelihood[k] >= fit.log_likelihood[k - 1] - 1e-9);
    }
  }
}

TEST_CASE("EM on random models: recovery, speed and normalization") {
  std::mt19937_64 rng(1234);
  int recovered = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const auto truth = testing::random_model(rng);
    const auto h = testing::sample_histogram(truth, 1000000, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const auto fit = em_fit(h, iterative_threshold_init(h));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 0.1);
    if (std::abs(fit.mu_b - truth.mu_b) <= 2 && std::abs(fit.mu_f - truth.mu_f) <= 2) ++recovered;
    double sum = 0;
    for (int i = 0; i <= h.max_level(); ++i) sum += model_eval(fit, i).total();
    CHECK(sum >= 0.9);
    CHECK(sum <= 1.1);
  }
  CHECK(recovered >= 9);
}

TEST_CASE("EM reports a degenerate fit") {
  // A single occupied level plus a stray count: the foreground class empties.
  std::vector<std::uint64_t> c(101, 0);
  c[0] = 1000000000;
  c[100] = 1;
  const Histogram h(c);
  HistogramModel init;
  init.p_b = 0.5;
  init.p_f = 0.5;
  init.mu_b = 0;
  init.mu_f = 100;
  init.sigma_b = init.sigma_f = 0.5;
  init.alpha = 0;
  EmOptions opt;
  opt.fit_alpha = false;
  // The foreground keeps only a single count, well below the mass floor.
  CHECK_THROWS_AS((void)em_fit(h, init, opt), FitError);
}
