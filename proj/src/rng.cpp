#include "fht/rng.hpp"

#include <cmath>

namespace fht {

namespace {

// Ziggurat tables for the standard normal (Marsaglia-Tsang construction,
// 256 layers). R is the abscissa of the outermost finite layer, V the common
// block area; xt[0] = V / phi(R) > R is the virtual width of the base strip.
constexpr int kLayers = 256;
constexpr double kR = 3.6541528853610088;
constexpr double kV = 4.92867323399e-3;

struct ZigTables {
  double xt[kLayers + 1];
  double ft[kLayers + 1];

  ZigTables() {
    auto f = [](double x) { return std::exp(-0.5 * x * x); };
    xt[0] = kV / f(kR);
    xt[1] = kR;
    for (int i = 2; i < kLayers; ++i)
      xt[i] = std::sqrt(-2.0 * std::log(kV / xt[i - 1] + f(xt[i - 1])));
    xt[kLayers] = 0.0;
    for (int i = 0; i <= kLayers; ++i) ft[i] = f(xt[i]);
  }
};

const ZigTables kZig{};

}  // namespace

double Xoshiro256pp::normal() {
  for (;;) {
    const std::uint64_t u = next();
    const int idx = static_cast<int>(u & 0xFF);
    const double sign = (u & 0x100) ? -1.0 : 1.0;
    const double frac = static_cast<double>(u >> 12) * 0x1.0p-52;
    const double x = frac * kZig.xt[idx];
    if (x < kZig.xt[idx + 1]) return sign * x;  // inside the layer rectangle
    if (idx == 0) {
      // Tail beyond R, Marsaglia's exponential wrap.
      double xx, yy;
      do {
        xx = -std::log(uniform_pos()) / kR;
        yy = -std::log(uniform_pos());
      } while (yy + yy < xx * xx);
      return sign * (kR + xx);
    }
    // Wedge between the inner and outer abscissa of layer idx.
    if (kZig.ft[idx] + uniform() * (kZig.ft[idx + 1] - kZig.ft[idx]) <
        std::exp(-0.5 * x * x))
      return sign * x;
  }
}

}  // namespace fht
