#ifndef EULAB_CORE_LINALG_HPP
#define EULAB_CORE_LINALG_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace core {

struct Vec3 {
  double v[3]{0, 0, 0};

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }

  Vec3 operator+(const Vec3& o) const { return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}; }
  Vec3 operator-(const Vec3& o) const { return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}; }
  Vec3 operator*(double s) const { return {v[0] * s, v[1] * s, v[2] * s}; }
  Vec3 operator-() const { return {-v[0], -v[1], -v[2]}; }
  Vec3& operator+=(const Vec3& o) {
    v[0] += o.v[0];
    v[1] += o.v[1];
    v[2] += o.v[2];
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& a) { return a * s; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.v[0] * b.v[0] + a.v[1] * b.v[1] + a.v[2] * b.v[2];
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.v[1] * b.v[2] - a.v[2] * b.v[1],
          a.v[2] * b.v[0] - a.v[0] * b.v[2],
          a.v[0] * b.v[1] - a.v[1] * b.v[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Mat3 {
  double m[3][3]{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1;
    return r;
  }
  static Mat3 diagonal(double a, double b, double c) {
    Mat3 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }

  double* operator[](int i) { return m[i]; }
  const double* operator[](int i) const { return m[i]; }

  Vec3 operator*(const Vec3& x) const {
    Vec3 r;
    for (int i = 0; i < 3; ++i)
      r[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    return r;
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
    return r;
  }
  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }
  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  Mat3 inverse() const {
    const double d = det();
    Mat3 r;
    r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
    r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
    r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
    r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
    r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
    r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
    r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
    r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
    r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
    return r;
  }
};

struct Mat2 {
  double m[2][2]{{0, 0}, {0, 0}};

  static Mat2 identity() {
    Mat2 r;
    r.m[0][0] = r.m[1][1] = 1;
    return r;
  }
  double* operator[](int i) { return m[i]; }
  const double* operator[](int i) const { return m[i]; }
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  double trace() const { return m[0][0] + m[1][1]; }
  Mat2 operator*(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
  }
  std::array<double, 2> operator*(const std::array<double, 2>& x) const {
    return {m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]};
  }
  Mat2 inverse() const {
    const double d = det();
    Mat2 r;
    r.m[0][0] = m[1][1] / d;
    r.m[0][1] = -m[0][1] / d;
    r.m[1][0] = -m[1][0] / d;
    r.m[1][1] = m[0][0] / d;
    return r;
  }
};

// Eigenvalues of a real 2x2 matrix as (re, im) pairs.
struct Eig2 {
  double re[2];
  double im[2];
};

inline Eig2 eigenvalues(const Mat2& a) {
  const double tr = a.trace();
  const double disc = tr * tr / 4.0 - a.det();
  Eig2 e{};
  if (disc >= 0) {
    const double s = std::sqrt(disc);
    e.re[0] = tr / 2 + s;
    e.re[1] = tr / 2 - s;
    e.im[0] = e.im[1] = 0;
  } else {
    const double s = std::sqrt(-disc);
    e.re[0] = e.re[1] = tr / 2;
    e.im[0] = s;
    e.im[1] = -s;
  }
  return e;
}

}  // namespace core

#endif
