#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "svwb/error.hpp"

namespace svwb {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
  }
  friend constexpr Vec3 operator*(const Vec3& v, double s) { return s * v; }
  friend constexpr Vec3 operator/(const Vec3& v, double s) {
    return {v.x / s, v.y / s, v.z / s};
  }
  friend constexpr bool operator==(const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

// A CIE XYZ triple in linear light. Components are not clamped: corrections
// may legitimately push values negative or above the reference white.
using Tristimulus = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

constexpr Vec3 hadamard(const Vec3& a, const Vec3& b) {
  return {a.x * b.x, a.y * b.y, a.z * b.z};
}

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Row-major 3x3 matrix of doubles.
struct Mat3 {
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static constexpr Mat3 identity() {
    return Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  }

  static constexpr Mat3 diagonal(double a, double b, double c) {
    return Mat3{{{a, 0, 0}, {0, b, 0}, {0, 0, c}}};
  }

  constexpr const double* operator[](int r) const { return m[r]; }
  constexpr double* operator[](int r) { return m[r]; }

  friend constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
            a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
            a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
  }

  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
    return r;
  }

  friend constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
  }

  friend constexpr Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = s * a.m[i][j];
    return r;
  }
};

constexpr Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[j][i];
  return r;
}

constexpr double determinant(const Mat3& a) {
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

// Inverse via the adjugate. Throws numeric_error on a singular matrix.
inline Mat3 inverse(const Mat3& a) {
  const double det = determinant(a);
  if (det == 0.0 || !std::isfinite(det)) {
    throw numeric_error("matrix inverse: singular or non-finite determinant");
  }
  const double inv_det = 1.0 / det;
  Mat3 r;
  r.m[0][0] = (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) * inv_det;
  r.m[0][1] = (a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2]) * inv_det;
  r.m[0][2] = (a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1]) * inv_det;
  r.m[1][0] = (a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2]) * inv_det;
  r.m[1][1] = (a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0]) * inv_det;
  r.m[1][2] = (a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2]) * inv_det;
  r.m[2][0] = (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]) * inv_det;
  r.m[2][1] = (a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1]) * inv_det;
  r.m[2][2] = (a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]) * inv_det;
  return r;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a.m[i][j] - b.m[i][j]));
  return worst;
}

// Eigendecomposition of a symmetric 3x3 matrix, eigenvalues sorted
// descending. vectors holds the corresponding eigenvectors as columns.
struct SymEigen3 {
  std::array<double, 3> values;
  Mat3 vectors;
};

// Cyclic Jacobi iteration. Only the upper triangle of `a` is read.
inline SymEigen3 eigen_sym3(const Mat3& a_in) {
  Mat3 a = a_in;
  Mat3 v = Mat3::identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(a.m[0][1]) + std::abs(a.m[0][2]) + std::abs(a.m[1][2]);
    const double diag = std::abs(a.m[0][0]) + std::abs(a.m[1][1]) + std::abs(a.m[2][2]);
    if (off <= 1e-15 * (diag + 1e-300)) break;
    static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pair : kPairs) {
      const int p = pair[0], q = pair[1];
      const double apq = a.m[p][q];
      if (apq == 0.0) continue;
      const double tau = (a.m[q][q] - a.m[p][p]) / (2.0 * apq);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      for (int k = 0; k < 3; ++k) {
        const double akp = a.m[k][p], akq = a.m[k][q];
        a.m[k][p] = c * akp - s * akq;
        a.m[k][q] = s * akp + c * akq;
      }
      for (int k = 0; k < 3; ++k) {
        const double apk = a.m[p][k], aqk = a.m[q][k];
        a.m[p][k] = c * apk - s * aqk;
        a.m[q][k] = s * apk + c * aqk;
      }
      for (int k = 0; k < 3; ++k) {
        const double vkp = v.m[k][p], vkq = v.m[k][q];
        v.m[k][p] = c * vkp - s * vkq;
        v.m[k][q] = s * vkp + c * vkq;
      }
    }
  }
  SymEigen3 out;
  int order[3] = {0, 1, 2};
  const double vals[3] = {a.m[0][0], a.m[1][1], a.m[2][2]};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (vals[order[j]] > vals[order[i]]) std::swap(order[i], order[j]);
  for (int i = 0; i < 3; ++i) {
    out.values[i] = vals[order[i]];
    for (int k = 0; k < 3; ++k) out.vectors.m[k][i] = v.m[k][order[i]];
  }
  return out;
}

}  // namespace svwb
