#include "ffbench/rational.hpp"

#include <ostream>
#include <sstream>

#include "ffbench/error.hpp"

namespace ffbench {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.sign() == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
  v_ /= o.v_;
  return *this;
}

BigInt parse_bigint(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!is_digits(body)) {
    throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  const BigInt num = parse_bigint(text.substr(0, slash));
  const std::string_view den_text = text.substr(slash + 1);
  if (!is_digits(den_text)) {
    throw Error(ErrorKind::ParseError, "bad denominator in '" + std::string(text) + "'");
  }
  const BigInt den(std::string(den_text), 10);
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

BigInt Rational::floor() const {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

BigInt Rational::ceil() const {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::approx(int digits) const {
  std::ostringstream os;
  os.precision(digits);
  os << v_.get_d();
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace ffbench
