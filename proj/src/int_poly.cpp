#include "domroots/int_poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "domroots/errors.hpp"
#include "json.hpp"

namespace domroots {

namespace {
const mpz_class kZero(0);
}  // namespace

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { normalize(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  c_.reserve(coeffs.size());
  for (long v : coeffs) c_.emplace_back(v);
  normalize();
}

IntPoly IntPoly::from_i64(std::span<const std::int64_t> coeffs) {
  std::vector<mpz_class> c;
  c.reserve(coeffs.size());
  for (std::int64_t v : coeffs) c.emplace_back(static_cast<long>(v));
  return IntPoly(std::move(c));
}

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly(std::vector<mpz_class>{c}); }

IntPoly IntPoly::monomial(const mpz_class& c, int degree) {
  std::vector<mpz_class> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::linear_root(const mpz_class& root) {
  return IntPoly(std::vector<mpz_class>{-root, mpz_class(1)});
}

void IntPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const mpz_class& IntPoly::operator[](std::size_t i) const { return i < c_.size() ? c_[i] : kZero; }

const mpz_class& IntPoly::leading() const { return c_.empty() ? kZero : c_.back(); }

mpz_class IntPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntPoly IntPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpz_class> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(d));
}

IntPoly IntPoly::reflect() const {
  std::vector<mpz_class> r = c_;
  for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
  return IntPoly(std::move(r));
}

int IntPoly::zero_root_multiplicity() const {
  int v = 0;
  while (v < static_cast<int>(c_.size()) && c_[static_cast<std::size_t>(v)] == 0) ++v;
  return v;
}

IntPoly IntPoly::shift_down(int v) const {
  if (v <= 0) return *this;
  if (v >= static_cast<int>(c_.size())) return {};
  return IntPoly(std::vector<mpz_class>(c_.begin() + v, c_.end()));
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  normalize();
  return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  normalize();
  return *this;
}

IntPoly& IntPoly::operator*=(const mpz_class& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& v : c_) v *= s;
  return *this;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPoly(std::move(r));
}

IntPoly IntPoly::pow(unsigned e) const {
  IntPoly result{1};
  IntPoly base = *this;
  while (e) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e) base = base * base;
  }
  return result;
}

std::string IntPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (i == 0 || mag != 1) out += mag.get_str();
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::string IntPoly::to_json() const {
  std::string out = "[";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ", ";
    // Values outside int64 are quoted so generic JSON readers keep them exact.
    if (c_[i].fits_slong_p())
      out += c_[i].get_str();
    else
      out += "\"" + c_[i].get_str() + "\"";
  }
  return out + "]";
}

IntPoly parse_poly(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') s += ch;
  if (s.empty()) throw ParseError("empty polynomial text");

  std::map<int, mpz_class> terms;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw ParseError("expected '+' or '-' at offset " + std::to_string(pos) + " in '" +
                       std::string(text) + "'");
    }
    first = false;
    std::size_t digits_start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    mpz_class coeff = 1;
    bool has_digits = pos > digits_start;
    if (has_digits) coeff = mpz_class(s.substr(digits_start, pos - digits_start));
    int power = 0;
    if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X')) {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::size_t p0 = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == p0) throw ParseError("missing exponent after '^' in '" + std::string(text) + "'");
        power = std::stoi(s.substr(p0, pos - p0));
      }
    } else if (!has_digits) {
      throw ParseError("unexpected character at offset " + std::to_string(pos) + " in '" +
                       std::string(text) + "'");
    }
    terms[power] += sign * coeff;
  }
  int deg = terms.rbegin()->first;
  std::vector<mpz_class> c(static_cast<std::size_t>(deg) + 1);
  for (auto& [p, v] : terms) c[static_cast<std::size_t>(p)] = v;
  return IntPoly(std::move(c));
}

IntPoly parse_poly_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON polynomial: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("JSON polynomial must be an array");
  std::vector<mpz_class> c;
  for (const auto& e : j) {
    if (e.is_number_unsigned()) {
      c.emplace_back(std::to_string(e.get<unsigned long long>()));
    } else if (e.is_number_integer()) {
      c.emplace_back(std::to_string(e.get<long long>()));
    } else if (e.is_string()) {
      try {
        c.emplace_back(e.get<std::string>());
      } catch (const std::invalid_argument&) {
        throw ParseError("invalid integer string in JSON polynomial");
      }
    } else {
      throw ParseError("JSON polynomial entries must be integers");
    }
  }
  return IntPoly(std::move(c));
}

IntPoly parse_poly_any(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') return parse_poly_json(text);
  return parse_poly(text);
}

bool canonical_less(const IntPoly& a, const IntPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(),
                                      b.coeffs().end());
}

}  // namespace domroots
