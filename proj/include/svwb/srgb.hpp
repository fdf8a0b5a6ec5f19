#pragma once

#include <cmath>

#include "svwb/color.hpp"
#include "svwb/error.hpp"
#include "svwb/linalg.hpp"

namespace svwb {

// sRGB-to-XYZ matrix for the D65 reference white (IEC 61966-2-1 primaries).
// The XYZ-to-sRGB direction uses the exact numeric inverse of these
// literals rather than the usual 7-digit published rounding, so the pair
// round-trips to machine precision.
inline constexpr Mat3 kSrgbToXyzMatrix{{{0.4124564, 0.3575761, 0.1804375},
                                        {0.2126729, 0.7151522, 0.0721750},
                                        {0.0193339, 0.1191920, 0.9503041}}};

inline const Mat3& xyz_to_srgb_matrix() {
  static const Mat3 inv = inverse(kSrgbToXyzMatrix);
  return inv;
}

inline double srgb_decode(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_encode(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline Tristimulus srgb_to_linear_xyz(double r, double g, double b) {
  for (double c : {r, g, b}) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw numeric_error("srgb_to_linear_xyz: channel value outside [0, 1]");
    }
  }
  return kSrgbToXyzMatrix * Vec3{srgb_decode(r), srgb_decode(g), srgb_decode(b)};
}

// Encoded sRGB triple. `clipped` reports whether any channel had to be
// clamped into [0, 1] on the way out of the linear domain.
struct EncodedSrgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  bool clipped = false;
};

inline EncodedSrgb linear_xyz_to_srgb(const Tristimulus& c) {
  // Exceedances below this are matrix round-trip noise, not gamut escapes;
  // they are clamped silently instead of raising the clip flag.
  constexpr double kClipNoiseFloor = 1e-9;
  const Vec3 lin = xyz_to_srgb_matrix() * c;
  EncodedSrgb out;
  double ch[3] = {lin.x, lin.y, lin.z};
  double* dst[3] = {&out.r, &out.g, &out.b};
  for (int i = 0; i < 3; ++i) {
    double v = ch[i];
    if (v < 0.0 || v > 1.0) {
      out.clipped = out.clipped || v < -kClipNoiseFloor || v > 1.0 + kClipNoiseFloor;
      v = v < 0.0 ? 0.0 : 1.0;
    }
    *dst[i] = srgb_encode(v);
  }
  return out;
}

}  // namespace svwb
