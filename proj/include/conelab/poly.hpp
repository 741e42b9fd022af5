#pragma once

// Dense homogeneous polynomials (forms) over a fixed monomial order.
//
// Every coefficient vector, Gram matrix and operator matrix in the library is
// indexed by MonomialBasis, which lists the exponent vectors of P_{n,d} in
// graded reverse lexicographic order: x1^d first, x_n^d last. Within a single
// degree this is the order in which, for a != b, a > b iff the last nonzero
// entry of a - b is negative.
//
// Sphere integrals use the rotation-invariant probability measure on S^{n-1}
// (total mass one) throughout.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "conelab/rational.hpp"

namespace conelab {

class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::vector<int> entries);
  ExponentVector(std::initializer_list<int> entries);

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  int degree() const noexcept { return degree_; }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const noexcept { return entries_; }

  bool any_odd() const noexcept;

  friend ExponentVector operator+(const ExponentVector& a, const ExponentVector& b);
  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<int> entries_;
  int degree_ = 0;
};

// True iff a precedes b in graded reverse lexicographic order.
bool grevlex_before(const ExponentVector& a, const ExponentVector& b);

std::string to_string(const ExponentVector& alpha);

// Canonical ordered basis of P_{n,d}. Instances are interned per (n, d) and
// shared read-only between threads.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int n, int degree);

  int n() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  int size() const noexcept { return static_cast<int>(monomials_.size()); }
  const ExponentVector& operator[](int i) const {
    return monomials_[static_cast<std::size_t>(i)];
  }
  const std::vector<ExponentVector>& monomials() const noexcept { return monomials_; }

  // Position of alpha in the basis, or -1 if alpha is not in P_{n,d}.
  int index_of(const ExponentVector& alpha) const;

  MonomialBasis(int n, int degree);

 private:
  std::uint64_t key(const std::vector<int>& e) const;

  int n_;
  int degree_;
  std::vector<ExponentVector> monomials_;
  std::unordered_map<std::uint64_t, int> index_;
};

std::vector<ExponentVector> monomial_basis(int n, int degree);

// index table: product_table(n, d1, d2)[i * size(d2) + j] is the position of
// monomial_i(d1) * monomial_j(d2) inside the basis of degree d1 + d2.
const std::vector<int>& product_table(int n, int d1, int d2);

template <class T>
class Form {
 public:
  using Scalar = T;

  Form(int n, int degree);
  Form(int n, int degree, std::vector<T> coeffs);

  static Form monomial(const ExponentVector& alpha, T coeff = T(1));
  static Form constant(int n, T value);

  int n() const noexcept { return basis_->n(); }
  int degree() const noexcept { return basis_->degree(); }
  int size() const noexcept { return basis_->size(); }
  const MonomialBasis& basis() const noexcept { return *basis_; }
  const std::vector<T>& coeffs() const noexcept { return coeffs_; }

  const T& operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  T& operator[](int i) { return coeffs_[static_cast<std::size_t>(i)]; }
  T coeff(const ExponentVector& alpha) const;

  bool is_zero() const;

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  Form& operator*=(const T& s);
  Form& operator/=(const T& s);

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= T(-1); }
  friend Form operator*(Form a, const T& s) { return a *= s; }
  friend Form operator*(const T& s, Form a) { return a *= s; }
  friend Form operator/(Form a, const T& s) { return a /= s; }
  friend bool operator==(const Form& a, const Form& b) {
    return a.n() == b.n() && a.degree() == b.degree() && a.coeffs_ == b.coeffs_;
  }

 private:
  void require_same_space(const Form& other, const char* op) const;

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<T> coeffs_;
};

using FormQ = Form<Rational>;
using FormD = Form<double>;

FormD to_numeric(const FormQ& f);
// Exact binary value of every coefficient; no rounding to "nice" fractions.
FormQ to_exact(const FormD& f);

template <class T>
T evaluate(const Form<T>& f, std::span<const T> x);

template <class T>
Form<T> multiply(const Form<T>& f, const Form<T>& g);

template <class T>
Form<T> power(const Form<T>& f, int exponent);

// Partial derivative in variable i (0-based). Degree-0 input yields the zero
// form of degree 0.
template <class T>
Form<T> differentiate(const Form<T>& f, int i);

template <class T>
Form<T> laplacian(const Form<T>& f);

// Sum over i of (d f / d x_i)^2.
template <class T>
Form<T> gradient_square(const Form<T>& f);

// (x1^2 + ... + xn^2)^k.
template <class T>
Form<T> r_power(int n, int k);

// (v1 x1 + ... + vn xn)^d; coefficients multinomial(d; alpha) v^alpha.
template <class T>
Form<T> linear_form_power(std::span<const T> v, int degree);

// f(L x) for an n x n matrix L. The SO(n) action A.f = f(A^{-1} x) is
// substitute(f, A^T) for orthogonal A.
template <class T>
Form<T> substitute(const Form<T>& f, const Matrix<T>& linear_map);

// Integral of x^alpha against the probability measure on S^{n-1}:
// zero if some alpha_i is odd, else prod (alpha_i - 1)!! / (n (n+2) ... (n+|alpha|-2)).
Rational sphere_moment(const ExponentVector& alpha);
double sphere_moment_numeric(const ExponentVector& alpha);

template <class T>
T sphere_moment_as(const ExponentVector& alpha);

template <class T>
T sphere_integral(const Form<T>& f);

// multinomial(|alpha|; alpha) and alpha! = prod alpha_i!.
Rational multinomial(const ExponentVector& alpha);
Rational exponent_factorial(const ExponentVector& alpha);

}  // namespace conelab
