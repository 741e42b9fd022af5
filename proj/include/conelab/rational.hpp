#pragma once

// Exact rational scalar used for identity verification. Numeric work uses
// double; conversions between the two are always spelled out at call sites.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace conelab {

using Rational = boost::multiprecision::mpq_rational;

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

// Exact value of a finite double.
Rational exact_from_double(double x);

// Parses "p/q", an integer, or a decimal literal ("-0.125", "1e-3") exactly.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

template <class T>
T scalar_from_rational(const Rational& q);

template <>
inline Rational scalar_from_rational<Rational>(const Rational& q) {
  return q;
}

template <>
inline double scalar_from_rational<double>(const Rational& q) {
  return to_double(q);
}

template <class T>
inline T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

Rational factorial(int m);
Rational binomial(int n, int k);
std::int64_t binomial_int(int n, int k);

}  // namespace conelab
