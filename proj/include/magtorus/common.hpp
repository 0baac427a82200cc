#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace magtorus {

using cplx = std::complex<double>;
using VecD = std::vector<double>;
using VecC = std::vector<cplx>;
using VecI = std::vector<long long>;
using MatD = std::vector<std::vector<double>>;
using MatI = std::vector<std::vector<long long>>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// reduce into [0, 2pi)
inline double mod_two_pi(double x) {
  double y = std::fmod(x, two_pi);
  if (y < 0) y += two_pi;
  if (y >= two_pi) y -= two_pi;  // guard against fmod rounding to the bound
  return y;
}

// reduce into [0, 1)
inline double mod_one(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y -= 1.0;
  return y;
}

// distance between phases modulo 2pi
inline double phase_dist(double a, double b) {
  double d = mod_two_pi(a - b);
  return std::min(d, two_pi - d);
}

inline double dot(const VecD& a, const VecD& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot(const VecI& a, const VecD& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += double(a[i]) * b[i];
  return s;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace magtorus
