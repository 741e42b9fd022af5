#include "conelab/polyio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "conelab/errors.hpp"

namespace conelab {

using nlohmann::json;

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class CoeffToString>
std::string write_impl(const Form<T>& f, CoeffToString&& coeff_to_string) {
  json terms = json::array();
  for (int m = 0; m < f.size(); ++m) {
    if (f[m] == T(0)) continue;
    terms.push_back(json::array({f.basis()[m].entries(), coeff_to_string(f[m])}));
  }
  json doc = {{"n", f.n()}, {"degree", f.degree()}, {"terms", terms}};
  return doc.dump(1) + "\n";
}

struct ParsedTerm {
  ExponentVector alpha;
  std::string coeff;
};

struct ParsedDocument {
  int n = 0;
  int degree = 0;
  std::vector<ParsedTerm> terms;
};

ParsedDocument parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("polynomial file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("degree") || !doc.contains("terms"))
    throw FormatError("polynomial file needs fields n, degree, terms");
  if (!doc["n"].is_number_integer() || !doc["degree"].is_number_integer())
    throw FormatError("n and degree must be integers");
  ParsedDocument out;
  out.n = doc["n"].get<int>();
  out.degree = doc["degree"].get<int>();
  if (out.n < 1 || out.degree < 0) throw FormatError("need n >= 1 and degree >= 0");
  if (!doc["terms"].is_array()) throw FormatError("terms must be a list");

  std::set<std::vector<int>> seen;
  for (const auto& term : doc["terms"]) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array())
      throw FormatError("each term must be [exponent-vector, coefficient]");
    std::vector<int> e;
    for (const auto& x : term[0]) {
      if (!x.is_number_integer() || x.get<int>() < 0) throw FormatError("exponents must be nonnegative integers");
      e.push_back(x.get<int>());
    }
    if (static_cast<int>(e.size()) != out.n)
      throw FormatError("exponent vector length " + std::to_string(e.size()) + " != n");
    if (!seen.insert(e).second) throw FormatError("duplicate monomial in terms");
    ExponentVector alpha(e);
    if (alpha.degree() != out.degree)
      throw FormatError("monomial " + to_string(alpha) + " has degree " + std::to_string(alpha.degree()));
    std::string coeff;
    if (term[1].is_string())
      coeff = term[1].get<std::string>();
    else if (term[1].is_number_integer())
      coeff = std::to_string(term[1].get<long long>());
    else
      throw FormatError("coefficients must be strings (decimal or p/q)");
    out.terms.push_back({std::move(alpha), std::move(coeff)});
  }
  return out;
}

double parse_double_coefficient(const std::string& s) {
  if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
  parse_rational(s);  // validates syntax
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (errno == ERANGE) throw FormatError("coefficient out of double range: " + s);
  return x;
}

}  // namespace

std::string write_form_text(const FormQ& f) {
  return write_impl(f, [](const Rational& q) { return to_string(q); });
}

std::string write_form_text(const FormD& f) {
  return write_impl(f, [](double x) { return format_double(x); });
}

FormQ read_form_exact(const std::string& text) {
  const auto doc = parse_document(text);
  FormQ f(doc.n, doc.degree);
  for (const auto& t : doc.terms) f[f.basis().index_of(t.alpha)] = parse_rational(t.coeff);
  return f;
}

FormD read_form_numeric(const std::string& text) {
  const auto doc = parse_document(text);
  FormD f(doc.n, doc.degree);
  for (const auto& t : doc.terms) f[f.basis().index_of(t.alpha)] = parse_double_coefficient(t.coeff);
  return f;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FormQ load_form_exact(const std::filesystem::path& path) { return read_form_exact(read_file(path)); }
FormD load_form_numeric(const std::filesystem::path& path) { return read_form_numeric(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace conelab
