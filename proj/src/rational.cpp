#include "supercong/rational.hpp"

#include <ostream>

#include "supercong/errors.hpp"

namespace supercong {

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InputError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto digits_ok = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view n = text.substr(0, slash);
  std::string_view d = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!digits_ok(n) || !digits_ok(d) || d.front() == '-' || d.front() == '+')
    throw InputError("malformed rational '" + std::string(text) + "'");
  std::string ns(n);
  if (ns.front() == '+') ns.erase(0, 1);
  return Rational(BigInt(ns, 10), BigInt(std::string(d), 10));
}

std::string Rational::str() const { return v_.get_str(10); }

std::string Rational::fraction_str() const {
  return v_.get_num().get_str(10) + "/" + v_.get_den().get_str(10);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InputError("division by zero rational");
  v_ /= o.v_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& x, long e) {
  if (e < 0) return pow(Rational(1) / x, -e);
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), x.num().get_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), x.den().get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

}  // namespace supercong
