#pragma once

// Exact rational arithmetic for width-threshold comparisons.  Widths may be
// given as "num/den" strings, decimal strings, or doubles (decomposed into
// their exact dyadic value), so threshold predicates never depend on rounding.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace layergraph {

using BigInt = boost::multiprecision::cpp_int;

struct Rational {
  BigInt num{0};
  BigInt den{1};

  Rational() = default;
  Rational(long long value) : num(value), den(1) {}  // NOLINT(google-explicit-constructor)
  Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  // Exact value of the double (doubles are dyadic rationals).
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Rational::from_double: non-finite");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    long long mi = std::llround(std::ldexp(mant, 53));
    exp -= 53;
    Rational r;
    r.num = mi;
    r.den = 1;
    if (exp >= 0) {
      r.num <<= exp;
    } else {
      r.den <<= -exp;
    }
    r.normalize();
    return r;
  }

  // Accepts "a/b", plain integers, and decimal strings such as "1.92".
  static std::optional<Rational> parse(const std::string& text) {
    const auto first = text.find_first_not_of(" \t");
    const auto last = text.find_last_not_of(" \t");
    if (first == std::string::npos) return std::nullopt;
    const std::string s = text.substr(first, last - first + 1);
    auto parse_int = [](const std::string& t) -> std::optional<BigInt> {
      if (t.empty()) return std::nullopt;
      std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
      if (i == t.size()) return std::nullopt;
      for (std::size_t j = i; j < t.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(t[j]))) return std::nullopt;
      return BigInt(t);
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
      auto n = parse_int(s.substr(0, slash));
      auto d = parse_int(s.substr(slash + 1));
      if (!n || !d || *d == 0) return std::nullopt;
      return Rational(*n, *d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string head = s.substr(0, dot);
      std::string tail = s.substr(dot + 1);
      if (tail.empty()) return std::nullopt;
      for (char c : tail)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      const bool neg = !head.empty() && head[0] == '-';
      if (!head.empty() && (head[0] == '+' || head[0] == '-')) head = head.substr(1);
      if (head.empty()) head = "0";
      auto whole = parse_int(head);
      if (!whole) return std::nullopt;
      BigInt scale = 1;
      for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
      BigInt n = *whole * scale + BigInt(tail);
      if (neg) n = -n;
      return Rational(n, scale);
    }
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rational(*n, 1);
  }

  [[nodiscard]] int cmp(const Rational& other) const {
    const BigInt lhs = num * other.den;
    const BigInt rhs = other.num * den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.cmp(b) >= 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }

  [[nodiscard]] Rational squared() const { return Rational(num * num, den * den); }

  [[nodiscard]] bool is_integer() const { return den == 1; }

  [[nodiscard]] BigInt floor_big() const {
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
  }

  [[nodiscard]] long long floor_ll() const { return floor_big().convert_to<long long>(); }

  [[nodiscard]] Rational fractional_part() const { return *this - Rational(floor_big(), 1); }

  [[nodiscard]] double to_double() const {
    return num.convert_to<double>() / den.convert_to<double>();
  }

  [[nodiscard]] std::string str() const {
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
};

}  // namespace layergraph
