#pragma once

#include <string>
#include <string_view>

#include "svwb/error.hpp"
#include "svwb/linalg.hpp"

namespace svwb {

// Sharpened cone-response components of a color under some adaptation basis.
struct ConeResponse {
  double rho = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
};

enum class CatKind {
  kXyzScaling,  // identity basis: balancing acts directly on XYZ
  kVonKries,    // Hunt-Pointer-Estevez cone primaries, D65-normalized
  kBradford,
};

// A chromatic adaptation basis: named 3x3 basis change plus its inverse.
// Instances come from adaptation_model(); the inverse is computed from the
// forward literals so matrix * inverse == identity to machine precision.
struct AdaptationModel {
  CatKind kind;
  std::string name;
  Mat3 matrix;
  Mat3 inverse;
};

inline constexpr Mat3 kBradfordMatrix{{{0.8951, 0.2664, -0.1614},
                                       {-0.7502, 1.7135, 0.0367},
                                       {0.0389, -0.0685, 1.0296}}};

inline constexpr Mat3 kVonKriesMatrix{{{0.4002400, 0.7076000, -0.0808100},
                                       {-0.2263000, 1.1653200, 0.0457000},
                                       {0.0000000, 0.0000000, 0.9182200}}};

inline constexpr Tristimulus kD65White{0.95047, 1.00000, 1.08883};
inline constexpr Tristimulus kD50White{0.96422, 1.00000, 0.82521};

inline const AdaptationModel& adaptation_model(CatKind kind) {
  static const AdaptationModel xyz_scaling{CatKind::kXyzScaling, "xyz-scaling",
                                           Mat3::identity(), Mat3::identity()};
  static const AdaptationModel von_kries{CatKind::kVonKries, "von-kries",
                                         kVonKriesMatrix, inverse(kVonKriesMatrix)};
  static const AdaptationModel bradford{CatKind::kBradford, "bradford",
                                        kBradfordMatrix, inverse(kBradfordMatrix)};
  switch (kind) {
    case CatKind::kXyzScaling: return xyz_scaling;
    case CatKind::kVonKries: return von_kries;
    case CatKind::kBradford: return bradford;
  }
  throw config_error("unknown adaptation model kind");
}

inline const AdaptationModel& adaptation_model(std::string_view name) {
  if (name == "xyz-scaling") return adaptation_model(CatKind::kXyzScaling);
  if (name == "von-kries") return adaptation_model(CatKind::kVonKries);
  if (name == "bradford") return adaptation_model(CatKind::kBradford);
  throw config_error("unknown adaptation model '" + std::string(name) +
                     "' (expected xyz-scaling, von-kries, or bradford)");
}

// Projects an XYZ color into the model's cone-response basis.
inline ConeResponse cone_response(const AdaptationModel& model, const Tristimulus& c) {
  const Vec3 r = model.matrix * c;
  return {r.x, r.y, r.z};
}

inline Tristimulus named_standard_white(std::string_view name) {
  if (name == "D65") return kD65White;
  if (name == "D50") return kD50White;
  throw config_error("unknown standard white '" + std::string(name) +
                     "' (expected D65 or D50)");
}

}  // namespace svwb
