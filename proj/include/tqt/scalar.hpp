#pragma once

#include <cmath>
#include <cstdio>
#include <complex>
#include <string>

#include <gmpxx.h>

namespace tqt {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Settings shared by every float-mode decision (rank, spectrum, comparisons).
/// Exact-mode code ignores the tolerance.
struct Session {
  double tolerance = 1e-10;
};

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode = "exact";
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
  static Rational conj(const Rational& x) { return x; }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* mode = "float";
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static std::string to_string(const Complex& x) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", x.real(), x.imag());
    return buf;
  }
};

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

/// Zero test: exact equality for rationals, absolute tolerance for floats.
template <class T>
bool near_zero(const T& x, const Session& session) {
  if constexpr (is_exact_v<T>) {
    return ScalarTraits<T>::is_zero(x);
  } else {
    return ScalarTraits<T>::magnitude(x) <= session.tolerance;
  }
}

template <class T>
double magnitude(const T& x) {
  return ScalarTraits<T>::magnitude(x);
}

/// (-1)^parity as a scalar.
template <class T>
T parity_sign(long parity) {
  return (parity & 1) ? T(-1) : T(1);
}

inline Complex to_complex(const Rational& x) { return Complex(x.get_d(), 0.0); }

}  // namespace tqt
