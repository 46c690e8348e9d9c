#include "nucseg/filter.hpp"

#include <cmath>
#include <numeric>

namespace nucseg {

std::vector<float> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0)) {
    throw InvalidArgument("sigma_s: must be >= 0");
  }
  if (sigma == 0.0) {
    return {1.0f};
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  for (int j = -radius; j <= radius; ++j) {
    k[j + radius] = std::exp(-(j * j) / (2.0 * sigma * sigma));
  }
  const double total = std::accumulate(k.begin(), k.end(), 0.0);
  std::vector<float> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    out[i] = static_cast<float>(k[i] / total);
  }
  return out;
}

namespace {

// Convolves every line along `axis` in place. Lines are gathered into a
// scratch buffer so the clamped border needs no branching in the inner loop.
void convolve_axis(VolumeF32 &vol, int axis, const std::vector<float> &kernel) {
  if (kernel.size() == 1) {
    return;
  }
  const auto &e = vol.extent();
  const std::size_t len = axis == 0 ? e.x : (axis == 1 ? e.y : e.z);
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? e.x : e.x * e.y);
  const int radius = static_cast<int>(kernel.size() / 2);

  std::vector<float> line(len + 2 * radius);
  auto data = vol.data();

  auto process = [&](std::size_t base) {
    for (std::size_t i = 0; i < len; ++i) {
      line[i + radius] = data[base + i * stride];
    }
    for (int i = 0; i < radius; ++i) {
      line[i] = line[radius];
      line[len + radius + i] = line[len + radius - 1];
    }
    for (std::size_t i = 0; i < len; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kernel.size(); ++k) {
        acc += static_cast<double>(kernel[k]) * line[i + k];
      }
      data[base + i * stride] = static_cast<float>(acc);
    }
  };

  if (axis == 0) {
    for (std::size_t z = 0; z < e.z; ++z)
      for (std::size_t y = 0; y < e.y; ++y) process(vol.index(0, y, z));
  } else if (axis == 1) {
    for (std::size_t z = 0; z < e.z; ++z)
      for (std::size_t x = 0; x < e.x; ++x) process(vol.index(x, 0, z));
  } else {
    for (std::size_t y = 0; y < e.y; ++y)
      for (std::size_t x = 0; x < e.x; ++x) process(vol.index(x, y, 0));
  }
}

}  // namespace

VolumeF32 gaussian_smooth(const VolumeF32 &volume, std::array<double, 3> sigma) {
  for (double s : sigma) {
    if (!(s >= 0.0)) {
      throw InvalidArgument("sigma_s: must be >= 0");
    }
  }
  VolumeF32 out = volume;
  if (out.empty()) {
    return out;
  }
  for (int axis = 0; axis < 3; ++axis) {
    convolve_axis(out, axis, gaussian_kernel(sigma[axis]));
  }
  return out;
}

}  // namespace nucseg
