#include "nucseg/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nucseg/error.hpp"
#include "nucseg/filter.hpp"

namespace nucseg {

void SceneConfig::validate() const {
  if (size.x == 0 || size.y == 0 || size.z == 0) {
    throw InvalidArgument("size: all components must be > 0");
  }
  if (!(spacing.x > 0 && spacing.y > 0 && spacing.z > 0)) {
    throw InvalidArgument("spacing: all components must be > 0");
  }
  if (nucleus_count < 0) throw InvalidArgument("nucleus_count: must be >= 0");
  for (int k = 0; k < 3; ++k) {
    if (!(semi_axis_min[k] > 0.0)) throw InvalidArgument("semi_axis_min: must be > 0");
    if (semi_axis_max[k] < semi_axis_min[k]) {
      throw InvalidArgument("semi_axis_max: must be >= semi_axis_min");
    }
    const double extent = static_cast<double>(size_of(k)) * spacing[k];
    if (2.0 * semi_axis_max[k] > extent) {
      throw InvalidArgument("semi_axis_max: ellipsoids do not fit within the volume");
    }
    if (psf_sigma[k] < 0.0) throw InvalidArgument("psf_sigma: must be >= 0");
  }
  if (!(clustering >= 0.0 && clustering <= 1.0)) {
    throw InvalidArgument("clustering: must lie in [0, 1]");
  }
  if (!(mu_b < mu_f)) throw InvalidArgument("mu_f: must exceed mu_b");
  if (noise_sigma < 0.0) throw InvalidArgument("noise_sigma: must be >= 0");
  if (!(attenuation > 0.0)) throw InvalidArgument("attenuation: must be > 0");
}

bool Ellipsoid::contains(const std::array<double, 3> &p) const {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = (p[k] - center[k]) / semi_axes[k];
    s += d * d;
  }
  return s <= 1.0;
}

double Ellipsoid::radius_along(const std::array<double, 3> &u) const {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = u[k] / semi_axes[k];
    s += d * d;
  }
  return 1.0 / std::sqrt(s);
}

double Ellipsoid::analytic_volume() const {
  return 4.0 / 3.0 * std::numbers::pi * semi_axes[0] * semi_axes[1] * semi_axes[2];
}

namespace {

constexpr int kMaxAttempts = 10000;

struct Box {
  std::array<std::int64_t, 3> lo;
  std::array<std::int64_t, 3> hi;  // inclusive
};

class Placer {
 public:
  Placer(const SceneConfig &cfg, LabelVolume &truth) : cfg_(cfg), truth_(truth) {}

  // Voxel-index bounding box of e, grown by `pad` voxels and clipped.
  Box box_of(const Ellipsoid &e, int pad) const {
    Box b{};
    for (int k = 0; k < 3; ++k) {
      const double s = cfg_.spacing[k];
      const auto n = static_cast<std::int64_t>(cfg_.size_of(k));
      b.lo[k] = std::max<std::int64_t>(
          0, static_cast<std::int64_t>(std::ceil((e.center[k] - e.semi_axes[k]) / s)) - pad);
      b.hi[k] = std::min<std::int64_t>(
          n - 1, static_cast<std::int64_t>(std::floor((e.center[k] + e.semi_axes[k]) / s)) + pad);
    }
    return b;
  }

  bool inside_bounds(const Ellipsoid &e) const {
    for (int k = 0; k < 3; ++k) {
      const double top = static_cast<double>(cfg_.size_of(k) - 1) * cfg_.spacing[k];
      if (e.center[k] - e.semi_axes[k] < 0.0 || e.center[k] + e.semi_axes[k] > top) return false;
    }
    return true;
  }

  // No voxel of e or its 26-neighborhood may carry a label other than `partner`.
  bool free_of_others(const Ellipsoid &e, std::uint32_t partner) const {
    const Box b = box_of(e, 1);
    for (auto z = b.lo[2]; z <= b.hi[2]; ++z) {
      for (auto y = b.lo[1]; y <= b.hi[1]; ++y) {
        for (auto x = b.lo[0]; x <= b.hi[0]; ++x) {
          const auto l = truth_(x, y, z);
          if (l == 0 || l == partner) continue;
          if (near(e, x, y, z)) return false;
        }
      }
    }
    return true;
  }

  void paint(const Ellipsoid &e) {
    const Box b = box_of(e, 0);
    for (auto z = b.lo[2]; z <= b.hi[2]; ++z) {
      for (auto y = b.lo[1]; y <= b.hi[1]; ++y) {
        for (auto x = b.lo[0]; x <= b.hi[0]; ++x) {
          if (e.contains(position(x, y, z))) truth_(x, y, z) = e.label;
        }
      }
    }
  }

 private:
  std::array<double, 3> position(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return {static_cast<double>(x) * cfg_.spacing.x, static_cast<double>(y) * cfg_.spacing.y,
            static_cast<double>(z) * cfg_.spacing.z};
  }

  // Voxel (x, y, z) lies in e or is 26-adjacent to a voxel of e.
  bool near(const Ellipsoid &e, std::int64_t x, std::int64_t y, std::int64_t z) const {
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (e.contains(position(x + dx, y + dy, z + dz))) return true;
        }
      }
    }
    return false;
  }

  const SceneConfig &cfg_;
  LabelVolume &truth_;
};

double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::array<double, 3> random_direction(std::mt19937_64 &rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    std::array<double, 3> u{n(rng), n(rng), n(rng)};
    const double len = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (len > 1e-12) return {u[0] / len, u[1] / len, u[2] / len};
  }
}

}  // namespace

Scene generate(const SceneConfig &cfg) {
  cfg.validate();
  Scene scene;
  scene.truth = LabelVolume(cfg.size, cfg.spacing, 0u);
  Placer placer(cfg, scene.truth);

  std::mt19937_64 rng(cfg.seed);
  const double max_overlap = 2.0 * std::min({cfg.spacing.x, cfg.spacing.y, cfg.spacing.z});

  for (int i = 0; i < cfg.nucleus_count; ++i) {
    Ellipsoid e;
    e.label = static_cast<std::uint32_t>(i + 1);
    for (int k = 0; k < 3; ++k) e.semi_axes[k] = uniform(rng, cfg.semi_axis_min[k], cfg.semi_axis_max[k]);
    const bool clustered = !scene.nuclei.empty() && uniform(rng, 0.0, 1.0) < cfg.clustering;

    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      std::uint32_t partner = 0;
      if (clustered) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, scene.nuclei.size() - 1)(rng);
        const auto &other = scene.nuclei[j];
        const auto u = random_direction(rng);
        const double d = other.radius_along(u) + e.radius_along(u) - uniform(rng, 0.0, max_overlap);
        for (int k = 0; k < 3; ++k) e.center[k] = other.center[k] + d * u[k];
        partner = other.label;
      } else {
        for (int k = 0; k < 3; ++k) {
          const double top = static_cast<double>(cfg.size_of(k) - 1) * cfg.spacing[k];
          e.center[k] = uniform(rng, e.semi_axes[k], std::max(e.semi_axes[k], top - e.semi_axes[k]));
        }
      }
      placed = placer.inside_bounds(e) && placer.free_of_others(e, partner);
    }
    if (!placed) {
      throw DataError("synth: could not place nucleus " + std::to_string(i + 1) + " after " +
                      std::to_string(kMaxAttempts) + " attempts");
    }
    placer.paint(e);
    scene.nuclei.push_back(e);
  }

  // Render.
  const double bg_end = cfg.background_end.value_or(cfg.mu_b);
  const double depth = std::max<double>(1.0, static_cast<double>(cfg.size.z - 1));
  VolumeF32 ideal(cfg.size, cfg.spacing, 0.0f);
  for (std::size_t z = 0; z < cfg.size.z; ++z) {
    const double t = static_cast<double>(z) / depth;
    const double bg = cfg.mu_b + (bg_end - cfg.mu_b) * t;
    const double contrast = (cfg.mu_f - cfg.mu_b) * (1.0 + (cfg.attenuation - 1.0) * t);
    for (std::size_t y = 0; y < cfg.size.y; ++y) {
      for (std::size_t x = 0; x < cfg.size.x; ++x) {
        ideal(x, y, z) = static_cast<float>(bg + (scene.truth(x, y, z) != 0 ? contrast : 0.0));
      }
    }
  }
  const auto blurred = gaussian_smooth(ideal, cfg.psf_sigma);

  std::mt19937_64 noise_rng(cfg.seed ^ 0x6a09e667f3bcc909ULL);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::uint16_t> out(blurred.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = blurred[i];
    if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * noise(noise_rng);
    out[i] = static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, 65535.0));
  }
  scene.intensity = VolumeU16(cfg.size, cfg.spacing, std::move(out));
  return scene;
}

}  // namespace nucseg
