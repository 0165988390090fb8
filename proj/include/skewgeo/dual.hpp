#pragma once

#include <cmath>
#include <type_traits>

namespace skewgeo {

/// Forward-mode dual number carrying one directional derivative.
/// Nesting (Dual<Dual<double>>) yields exact second derivatives.
template <typename T>
struct Dual {
  T value{};
  T deriv{};
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};

inline double primal(double x) { return x; }
template <typename T>
double primal(const Dual<T>& x) {
  return primal(x.value);
}

template <typename T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.value, -a.deriv};
}

template <typename T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.value + b.value, a.deriv + b.deriv};
}
template <typename T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.value - b.value, a.deriv - b.deriv};
}
template <typename T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}
template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

template <typename T>
Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.value + b, a.deriv};
}
template <typename T>
Dual<T> operator+(double a, const Dual<T>& b) {
  return {a + b.value, b.deriv};
}
template <typename T>
Dual<T> operator-(const Dual<T>& a, double b) {
  return {a.value - b, a.deriv};
}
template <typename T>
Dual<T> operator-(double a, const Dual<T>& b) {
  return {a - b.value, -b.deriv};
}
template <typename T>
Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.value * b, a.deriv * b};
}
template <typename T>
Dual<T> operator*(double a, const Dual<T>& b) {
  return {a * b.value, a * b.deriv};
}
template <typename T>
Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.value / b, a.deriv / b};
}

template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.value), cos(a.value) * a.deriv};
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.value), -(sin(a.value) * a.deriv)};
}
template <typename T>
Dual<T> tan(const Dual<T>& a) {
  using std::cos;
  using std::tan;
  T c = cos(a.value);
  return {tan(a.value), a.deriv / (c * c)};
}
template <typename T>
Dual<T> sinh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {sinh(a.value), cosh(a.value) * a.deriv};
}
template <typename T>
Dual<T> cosh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {cosh(a.value), sinh(a.value) * a.deriv};
}
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.value);
  return {e, e * a.deriv};
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.value), a.deriv / a.value};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}

/// Real power with a constant exponent. A zero exponent has zero derivative
/// even at a zero base.
template <typename T>
Dual<T> pow(const Dual<T>& a, double n) {
  using std::pow;
  if (n == 0.0) return {T{} + 1.0, T{}};
  return {pow(a.value, n), n * pow(a.value, n - 1.0) * a.deriv};
}

}  // namespace skewgeo
