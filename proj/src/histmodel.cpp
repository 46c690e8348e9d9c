#include "nucseg/histmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nucseg/error.hpp"

namespace nucseg {

namespace {

constexpr double kTiny = 1e-300;

double normal_density(double prior, double mean, double sigma, double i) {
  const double z = (i - mean) / sigma;
  return prior / (std::sqrt(2.0 * std::numbers::pi) * sigma) * std::exp(-0.5 * z * z);
}

double log_normal_density(double prior, double mean, double sigma, double i) {
  const double z = (i - mean) / sigma;
  return std::log(std::max(prior, kTiny)) - std::log(sigma) - 0.5 * z * z;
}

double relative_change(double before, double after) {
  return std::abs(after - before) / std::max(std::abs(before), 1e-9);
}

}  // namespace

void HistogramModel::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw InvalidArgument(std::string("histogram model: ") + what);
  };
  require(std::isfinite(p_b) && p_b >= 0.0 && p_b <= 1.0, "p_b must lie in [0, 1]");
  require(std::isfinite(p_f) && p_f >= 0.0 && p_f <= 1.0, "p_f must lie in [0, 1]");
  require(p_b + p_f > 0.0 && p_b + p_f <= 1.0001, "p_b + p_f must lie in (0, 1.0001]");
  require(std::isfinite(mu_b) && std::isfinite(mu_f) && mu_b < mu_f, "mu_b must be below mu_f");
  require(std::isfinite(sigma_b) && sigma_b > 0.0, "sigma_b must be > 0");
  require(std::isfinite(sigma_f) && sigma_f > 0.0, "sigma_f must be > 0");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
}

void to_json(nlohmann::json &j, const HistogramModel &m) {
  j = nlohmann::json{{"p_b", m.p_b},     {"mu_b", m.mu_b}, {"sigma_b", m.sigma_b},
                     {"p_f", m.p_f},     {"mu_f", m.mu_f}, {"sigma_f", m.sigma_f},
                     {"alpha", m.alpha}};
}

void from_json(const nlohmann::json &j, HistogramModel &m) {
  j.at("p_b").get_to(m.p_b);
  j.at("mu_b").get_to(m.mu_b);
  j.at("sigma_b").get_to(m.sigma_b);
  j.at("p_f").get_to(m.p_f);
  j.at("mu_f").get_to(m.mu_f);
  j.at("sigma_f").get_to(m.sigma_f);
  j.at("alpha").get_to(m.alpha);
}

ModelTerms model_eval(const HistogramModel &m, double i, double max_level) {
  if (!(i >= 0.0) || i > max_level) {
    throw InvalidArgument("gray level " + std::to_string(i) + " outside [0, K]");
  }
  ModelTerms t;
  t.nb = normal_density(m.p_b, m.mu_b, m.sigma_b, i);
  t.f = normal_density(m.p_f, m.mu_f, m.sigma_f, i);
  if (i >= m.mu_b + 2.0 * m.sigma_b && i < m.mu_f) {
    const double d = i - m.mu_b;
    t.ib = 2.0 * m.alpha * m.p_f / d * std::log((m.mu_f - m.mu_b) / d);
  }
  return t;
}

HistogramModel iterative_threshold_init(const Histogram &histogram) {
  const double t = isodata_threshold(histogram);
  double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
  const auto &c = histogram.counts();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = histogram.frequency(i);
    if (static_cast<double>(i) <= t) {
      n0 += w;
      s0 += w * static_cast<double>(i);
    } else {
      n1 += w;
      s1 += w * static_cast<double>(i);
    }
  }
  HistogramModel m;
  m.p_b = n0;
  m.mu_b = s0 / n0;
  m.p_f = n1;
  m.mu_f = s1 / n1;
  m.sigma_b = 1.0;
  m.sigma_f = 1.0;
  m.alpha = 0.01;
  return m;
}

double log_likelihood(const Histogram &histogram, const HistogramModel &m) {
  double ll = 0.0;
  const auto &c = histogram.counts();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const auto t = model_eval(m, static_cast<double>(i));
    ll += histogram.frequency(i) * std::log(std::max(t.total(), kTiny));
  }
  return ll;
}

EmFit em_fit_detailed(const Histogram &histogram, const HistogramModel &init,
                      const EmOptions &options) {
  init.validate();
  const auto &c = histogram.counts();
  const std::size_t levels = c.size();

  EmFit fit;
  fit.model = init;
  fit.log_likelihood.push_back(log_likelihood(histogram, init));

  std::vector<double> w_nb(levels), w_ib(levels), w_f(levels);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const HistogramModel &m = fit.model;

    // E-step: share of each term in every occupied bin.
    for (std::size_t i = 0; i < levels; ++i) {
      w_nb[i] = w_ib[i] = w_f[i] = 0.0;
      if (c[i] == 0) continue;
      const double x = static_cast<double>(i);
      const auto t = model_eval(m, x);
      const double total = t.total();
      if (total > kTiny) {
        w_nb[i] = t.nb / total;
        w_ib[i] = t.ib / total;
        w_f[i] = t.f / total;
      } else {
        const double lb = log_normal_density(m.p_b, m.mu_b, m.sigma_b, x);
        const double lf = log_normal_density(m.p_f, m.mu_f, m.sigma_f, x);
        w_nb[i] = 1.0 / (1.0 + std::exp(lf - lb));
        w_f[i] = 1.0 - w_nb[i];
      }
    }

    // M-step: class-normalized weighted moments.
    HistogramModel next = m;
    double pb = 0, pf = 0, sb = 0, sf = 0;
    for (std::size_t i = 0; i < levels; ++i) {
      if (c[i] == 0) continue;
      const double h = histogram.frequency(i);
      const double x = static_cast<double>(i);
      pb += w_nb[i] * h;
      pf += w_f[i] * h;
      sb += w_nb[i] * h * x;
      sf += w_f[i] * h * x;
    }
    if (pb < 1e-8 || pf < 1e-8) {
      throw FitError("histogram model fit degenerated: a class lost all of its mass");
    }
    next.p_b = pb;
    next.p_f = pf;
    next.mu_b = sb / pb;
    next.mu_f = sf / pf;
    if (!(next.mu_b < next.mu_f)) {
      throw FitError("histogram model fit degenerated: background mean reached foreground mean");
    }
    double vb = 0, vf = 0;
    for (std::size_t i = 0; i < levels; ++i) {
      if (c[i] == 0) continue;
      const double h = histogram.frequency(i);
      const double x = static_cast<double>(i);
      vb += w_nb[i] * h * (x - next.mu_b) * (x - next.mu_b);
      vf += w_f[i] * h * (x - next.mu_f) * (x - next.mu_f);
    }
    next.sigma_b = std::max(std::sqrt(vb / pb), options.sigma_floor);
    next.sigma_f = std::max(std::sqrt(vf / pf), options.sigma_floor);

    // alpha from the illuminated-background share inside the truncated range.
    // The IB term integrates to alpha * p_f * log(eps)^2 over that range.
    if (options.fit_alpha) {
      const double lo = next.mu_b + 2.0 * next.sigma_b;
      const double eps = 2.0 * next.sigma_b / (next.mu_f - next.mu_b);
      double mass = 0.0;
      for (std::size_t i = 0; i < levels; ++i) {
        const double x = static_cast<double>(i);
        if (c[i] == 0 || x < lo || x >= next.mu_f) continue;
        mass += w_ib[i] * histogram.frequency(i);
      }
      if (eps > 0.0 && eps < 1.0 && mass > 0.0) {
        const double log_eps = std::log(eps);
        next.alpha = mass / (next.p_f * log_eps * log_eps);
      }
    }

    const double change = std::max({relative_change(m.p_b, next.p_b),
                                    relative_change(m.mu_b, next.mu_b),
                                    relative_change(m.sigma_b, next.sigma_b),
                                    relative_change(m.p_f, next.p_f),
                                    relative_change(m.mu_f, next.mu_f),
                                    relative_change(m.sigma_f, next.sigma_f),
                                    relative_change(m.alpha, next.alpha)});
    fit.model = next;
    fit.iterations = iter + 1;
    fit.log_likelihood.push_back(log_likelihood(histogram, next));
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

int model_threshold(const HistogramModel &m) {
  const int first = static_cast<int>(std::floor(m.mu_b)) + 1;
  const int last = static_cast<int>(std::floor(m.mu_f));
  for (int i = std::max(first, 0); i <= last; ++i) {
    const auto t = model_eval(m, i);
    if (t.f >= t.background()) {
      return i;
    }
  }
  throw FitError("histogram model: foreground density never reaches background density");
}

double background_posterior(const HistogramModel &m, double i) {
  const auto t = model_eval(m, std::max(i, 0.0));
  const double total = t.total();
  double p;
  if (total > kTiny) {
    p = t.background() / total;
  } else {
    const double lb = log_normal_density(m.p_b, m.mu_b, m.sigma_b, i);
    const double lf = log_normal_density(m.p_f, m.mu_f, m.sigma_f, i);
    p = 1.0 / (1.0 + std::exp(lf - lb));
  }
  return std::clamp(p, kPosteriorFloor, 1.0);
}

}  // namespace nucseg
