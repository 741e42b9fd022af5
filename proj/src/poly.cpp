#include "conelab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "conelab/errors.hpp"

namespace conelab {

// ---------------------------------------------------------------- rationals

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("exact_from_double: non-finite value");
  return Rational(x);
}

namespace {

bool is_integer_literal(const std::string& s) {
  std::size_t i = (s.size() > 0 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

boost::multiprecision::mpz_int parse_integer(const std::string& s) {
  if (!is_integer_literal(s)) throw FormatError("not an integer literal: '" + s + "'");
  std::string sign, t = s;
  if (t[0] == '+' || t[0] == '-') {
    if (t[0] == '-') sign = "-";
    t = t.substr(1);
  }
  // mpz reads a leading 0 as octal
  const auto first = t.find_first_not_of('0');
  t = first == std::string::npos ? "0" : t.substr(first);
  return boost::multiprecision::mpz_int(sign + t);
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) throw FormatError("empty coefficient");

  if (auto slash = text.find('/'); slash != std::string::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in '" + raw + "'");
    return Rational(num, den);
  }

  // decimal literal with optional exponent
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    const std::string exp_part = text.substr(e + 1);
    if (!is_integer_literal(exp_part)) throw FormatError("bad exponent in '" + raw + "'");
    exponent = std::stol(exp_part);
  }
  std::string digits = mantissa;
  if (auto dot = mantissa.find('.'); dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    if (digits == "" || digits == "-" || digits == "+") throw FormatError("bad number '" + raw + "'");
  }
  Rational value(parse_integer(digits));
  boost::multiprecision::mpz_int scale = 1;
  for (long i = 0; i < std::labs(exponent); ++i) scale *= 10;
  return exponent >= 0 ? Rational(value * scale) : Rational(value / scale);
}

std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational factorial(int m) {
  boost::multiprecision::mpz_int r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return Rational(r);
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  boost::multiprecision::mpz_int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return Rational(r);
}

std::int64_t binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ----------------------------------------------------------- exponent vectors

ExponentVector::ExponentVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("ExponentVector: negative exponent");
    degree_ += e;
  }
}

ExponentVector::ExponentVector(std::initializer_list<int> entries)
    : ExponentVector(std::vector<int>(entries)) {}

bool ExponentVector::any_odd() const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [](int e) { return e % 2 != 0; });
}

ExponentVector operator+(const ExponentVector& a, const ExponentVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ExponentVector: length mismatch");
  std::vector<int> s(a.entries_);
  for (int i = 0; i < a.size(); ++i) s[static_cast<std::size_t>(i)] += b[i];
  return ExponentVector(std::move(s));
}

bool grevlex_before(const ExponentVector& a, const ExponentVector& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  for (int i = a.size() - 1; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::string to_string(const ExponentVector& alpha) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
  os << ')';
  return os.str();
}

// ------------------------------------------------------------- monomial basis

namespace {

void enumerate(int n, int remaining, std::vector<int>& cur, std::vector<ExponentVector>& out) {
  const std::size_t pos = cur.size();
  if (static_cast<int>(pos) == n - 1) {
    cur.push_back(remaining);
    out.emplace_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.push_back(e);
    enumerate(n, remaining - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int n, int degree) : n_(n), degree_(degree) {
  if (n < 1) throw std::invalid_argument("monomial basis needs n >= 1");
  if (degree < 0) throw std::invalid_argument("monomial basis needs degree >= 0");
  std::vector<int> cur;
  enumerate(n, degree, cur, monomials_);
  std::sort(monomials_.begin(), monomials_.end(), grevlex_before);
  for (int i = 0; i < size(); ++i) index_.emplace(key(monomials_[static_cast<std::size_t>(i)].entries()), i);
}

std::uint64_t MonomialBasis::key(const std::vector<int>& e) const {
  std::uint64_t k = 0;
  for (int x : e) k = k * static_cast<std::uint64_t>(degree_ + 1) + static_cast<std::uint64_t>(x);
  return k;
}

int MonomialBasis::index_of(const ExponentVector& alpha) const {
  if (alpha.size() != n_ || alpha.degree() != degree_) return -1;
  auto it = index_.find(key(alpha.entries()));
  return it == index_.end() ? -1 : it->second;
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int n, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(n, degree);
  return slot;
}

std::vector<ExponentVector> monomial_basis(int n, int degree) {
  return MonomialBasis::get(n, degree)->monomials();
}

const std::vector<int>& product_table(int n, int d1, int d2) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<const std::vector<int>>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, d1, d2}); it != cache.end()) return *it->second;
  }
  const auto b1 = MonomialBasis::get(n, d1);
  const auto b2 = MonomialBasis::get(n, d2);
  const auto b = MonomialBasis::get(n, d1 + d2);
  auto table = std::make_unique<std::vector<int>>(static_cast<std::size_t>(b1->size()) * b2->size());
  for (int i = 0; i < b1->size(); ++i)
    for (int j = 0; j < b2->size(); ++j)
      (*table)[static_cast<std::size_t>(i) * b2->size() + j] = b->index_of((*b1)[i] + (*b2)[j]);
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(std::make_tuple(n, d1, d2), std::move(table));
  return *it->second;
}

// ----------------------------------------------------------------------- Form

template <class T>
Form<T>::Form(int n, int degree)
    : basis_(MonomialBasis::get(n, degree)), coeffs_(static_cast<std::size_t>(basis_->size()), T(0)) {}

template <class T>
Form<T>::Form(int n, int degree, std::vector<T> coeffs)
    : basis_(MonomialBasis::get(n, degree)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != basis_->size())
    throw std::invalid_argument("Form: coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match dim P_{n,d} = " + std::to_string(basis_->size()));
}

template <class T>
Form<T> Form<T>::monomial(const ExponentVector& alpha, T coeff) {
  Form f(alpha.size(), alpha.degree());
  f.coeffs_[static_cast<std::size_t>(f.basis_->index_of(alpha))] = std::move(coeff);
  return f;
}

template <class T>
Form<T> Form<T>::constant(int n, T value) {
  return Form(n, 0, {std::move(value)});
}

template <class T>
T Form<T>::coeff(const ExponentVector& alpha) const {
  const int i = basis_->index_of(alpha);
  return i < 0 ? T(0) : coeffs_[static_cast<std::size_t>(i)];
}

template <class T>
bool Form<T>::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const T& c) { return c == T(0); });
}

template <class T>
void Form<T>::require_same_space(const Form& other, const char* op) const {
  if (n() != other.n() || degree() != other.degree())
    throw std::invalid_argument(std::string("Form ") + op + ": operands live in different spaces");
}

template <class T>
Form<T>& Form<T>::operator+=(const Form& other) {
  require_same_space(other, "+");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

template <class T>
Form<T>& Form<T>::operator-=(const Form& other) {
  require_same_space(other, "-");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

template <class T>
Form<T>& Form<T>::operator*=(const T& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

template <class T>
Form<T>& Form<T>::operator/=(const T& s) {
  if (s == T(0)) throw std::domain_error("Form: division by zero");
  for (auto& c : coeffs_) c /= s;
  return *this;
}

FormD to_numeric(const FormQ& f) {
  std::vector<double> c;
  c.reserve(f.coeffs().size());
  for (const auto& q : f.coeffs()) c.push_back(to_double(q));
  return FormD(f.n(), f.degree(), std::move(c));
}

FormQ to_exact(const FormD& f) {
  std::vector<Rational> c;
  c.reserve(f.coeffs().size());
  for (double x : f.coeffs()) c.push_back(exact_from_double(x));
  return FormQ(f.n(), f.degree(), std::move(c));
}

// ------------------------------------------------------------------ calculus

template <class T>
T evaluate(const Form<T>& f, std::span<const T> x) {
  if (static_cast<int>(x.size()) != f.n())
    throw std::invalid_argument("evaluate: point has " + std::to_string(x.size()) +
                                " coordinates, form has n = " + std::to_string(f.n()));
  const int n = f.n();
  const int d = f.degree();
  // pw[i][e] = x_i^e
  std::vector<std::vector<T>> pw(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(d + 1)));
  for (int i = 0; i < n; ++i) {
    pw[i][0] = T(1);
    for (int e = 1; e <= d; ++e) pw[i][e] = pw[i][e - 1] * x[static_cast<std::size_t>(i)];
  }
  T total(0);
  for (int m = 0; m < f.size(); ++m) {
    if (f[m] == T(0)) continue;
    T term = f[m];
    const auto& a = f.basis()[m];
    for (int i = 0; i < n; ++i)
      if (a[i]) term *= pw[i][a[i]];
    total += term;
  }
  return total;
}

template <class T>
Form<T> multiply(const Form<T>& f, const Form<T>& g) {
  if (f.n() != g.n()) throw std::invalid_argument("multiply: variable-count mismatch");
  Form<T> h(f.n(), f.degree() + g.degree());
  const auto& table = product_table(f.n(), f.degree(), g.degree());
  const std::size_t gs = static_cast<std::size_t>(g.size());
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] == T(0)) continue;
    for (int j = 0; j < g.size(); ++j) {
      if (g[j] == T(0)) continue;
      h[table[static_cast<std::size_t>(i) * gs + j]] += f[i] * g[j];
    }
  }
  return h;
}

template <class T>
Form<T> power(const Form<T>& f, int exponent) {
  if (exponent < 0) throw std::invalid_argument("power: negative exponent");
  Form<T> result = Form<T>::constant(f.n(), T(1));
  Form<T> base = f;
  while (exponent > 0) {
    if (exponent & 1) result = multiply(result, base);
    exponent >>= 1;
    if (exponent) base = multiply(base, base);
  }
  return result;
}

template <class T>
Form<T> differentiate(const Form<T>& f, int i) {
  if (i < 0 || i >= f.n()) throw std::out_of_range("differentiate: variable index out of range");
  if (f.degree() == 0) return Form<T>(f.n(), 0);
  Form<T> out(f.n(), f.degree() - 1);
  for (int m = 0; m < f.size(); ++m) {
    const auto& a = f.basis()[m];
    if (a[i] == 0 || f[m] == T(0)) continue;
    std::vector<int> e = a.entries();
    e[static_cast<std::size_t>(i)] -= 1;
    out[out.basis().index_of(ExponentVector(std::move(e)))] += f[m] * T(a[i]);
  }
  return out;
}

template <class T>
Form<T> laplacian(const Form<T>& f) {
  if (f.degree() < 2) return Form<T>(f.n(), 0);
  Form<T> out(f.n(), f.degree() - 2);
  for (int m = 0; m < f.size(); ++m) {
    if (f[m] == T(0)) continue;
    const auto& a = f.basis()[m];
    for (int i = 0; i < f.n(); ++i) {
      if (a[i] < 2) continue;
      std::vector<int> e = a.entries();
      e[static_cast<std::size_t>(i)] -= 2;
      out[out.basis().index_of(ExponentVector(std::move(e)))] += f[m] * T(a[i] * (a[i] - 1));
    }
  }
  return out;
}

template <class T>
Form<T> gradient_square(const Form<T>& f) {
  const int out_degree = f.degree() == 0 ? 0 : 2 * f.degree() - 2;
  Form<T> out(f.n(), out_degree);
  if (f.degree() == 0) return out;
  for (int i = 0; i < f.n(); ++i) {
    const Form<T> di = differentiate(f, i);
    out += multiply(di, di);
  }
  return out;
}

template <class T>
Form<T> r_power(int n, int k) {
  if (k < 0) throw std::invalid_argument("r_power: k must be nonnegative");
  Form<T> r2(n, 2);
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 2;
    r2[r2.basis().index_of(ExponentVector(std::move(e)))] = T(1);
  }
  return power(r2, k);
}

template <class T>
Form<T> linear_form_power(std::span<const T> v, int degree) {
  if (v.empty()) throw std::invalid_argument("linear_form_power: empty vector");
  if (std::all_of(v.begin(), v.end(), [](const T& x) { return x == T(0); }))
    throw std::invalid_argument("linear_form_power: zero vector");
  const int n = static_cast<int>(v.size());
  Form<T> out(n, degree);
  for (int m = 0; m < out.size(); ++m) {
    const auto& a = out.basis()[m];
    T term = scalar_from_rational<T>(multinomial(a));
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < a[i]; ++e) term *= v[static_cast<std::size_t>(i)];
    out[m] = term;
  }
  return out;
}

template <class T>
Form<T> substitute(const Form<T>& f, const Matrix<T>& linear_map) {
  const int n = f.n();
  if (linear_map.rows() != n || linear_map.cols() != n)
    throw std::invalid_argument("substitute: linear map must be n x n");
  // y_i = (L x)_i as linear forms, and their powers
  std::vector<std::vector<Form<T>>> pw;
  pw.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Form<T> yi(n, 1);
    for (int j = 0; j < n; ++j) yi[yi.basis().index_of([&] {
                                    std::vector<int> e(static_cast<std::size_t>(n), 0);
                                    e[static_cast<std::size_t>(j)] = 1;
                                    return ExponentVector(std::move(e));
                                  }())] = linear_map(i, j);
    std::vector<Form<T>> row{Form<T>::constant(n, T(1))};
    for (int e = 1; e <= f.degree(); ++e) row.push_back(multiply(row.back(), yi));
    pw.push_back(std::move(row));
  }
  Form<T> out(n, f.degree());
  for (int m = 0; m < f.size(); ++m) {
    if (f[m] == T(0)) continue;
    const auto& a = f.basis()[m];
    Form<T> term = Form<T>::constant(n, f[m]);
    for (int i = 0; i < n; ++i)
      if (a[i]) term = multiply(term, pw[i][a[i]]);
    out += term;
  }
  return out;
}

// ------------------------------------------------------------------- moments

Rational sphere_moment(const ExponentVector& alpha) {
  if (alpha.any_odd()) return Rational(0);
  const int n = alpha.size();
  boost::multiprecision::mpz_int num = 1, den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = alpha[i] - 1; j > 0; j -= 2) num *= j;
  for (int j = 0; j < alpha.degree() / 2; ++j) den *= n + 2 * j;
  return Rational(num, den);
}

double sphere_moment_numeric(const ExponentVector& alpha) {
  if (alpha.any_odd()) return 0.0;
  const int n = alpha.size();
  double value = 1.0;
  int j = 0;
  // (alpha_i - 1)!! = 1 * 3 * ... * (alpha_i - 1) has alpha_i / 2 factors, as
  // many in total as the denominator; pair them up to stay in range
  for (int i = 0; i < n; ++i) {
    for (int t = 1; t < alpha[i]; t += 2) {
      value *= static_cast<double>(t) / (n + 2 * j);
      ++j;
    }
  }
  return value;
}

template <>
Rational sphere_moment_as<Rational>(const ExponentVector& alpha) {
  return sphere_moment(alpha);
}

template <>
double sphere_moment_as<double>(const ExponentVector& alpha) {
  return sphere_moment_numeric(alpha);
}

template <class T>
T sphere_integral(const Form<T>& f) {
  T total(0);
  for (int m = 0; m < f.size(); ++m)
    if (f[m] != T(0)) total += f[m] * sphere_moment_as<T>(f.basis()[m]);
  return total;
}

Rational multinomial(const ExponentVector& alpha) {
  return factorial(alpha.degree()) / exponent_factorial(alpha);
}

Rational exponent_factorial(const ExponentVector& alpha) {
  Rational r(1);
  for (int e : alpha.entries()) r *= factorial(e);
  return r;
}

// -------------------------------------------------------- instantiations

template class Form<double>;
template class Form<Rational>;

#define CONELAB_INSTANTIATE(T)                                             \
  template T evaluate<T>(const Form<T>&, std::span<const T>);             \
  template Form<T> multiply<T>(const Form<T>&, const Form<T>&);           \
  template Form<T> power<T>(const Form<T>&, int);                         \
  template Form<T> differentiate<T>(const Form<T>&, int);                 \
  template Form<T> laplacian<T>(const Form<T>&);                          \
  template Form<T> gradient_square<T>(const Form<T>&);                    \
  template Form<T> r_power<T>(int, int);                                  \
  template Form<T> linear_form_power<T>(std::span<const T>, int);         \
  template Form<T> substitute<T>(const Form<T>&, const Matrix<T>&);       \
  template T sphere_integral<T>(const Form<T>&);

CONELAB_INSTANTIATE(double)
CONELAB_INSTANTIATE(Rational)

#undef CONELAB_INSTANTIATE

}  // namespace conelab
