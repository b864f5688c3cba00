#pragma once

#include <optional>
#include <vector>

#include "ffbench/rational.hpp"

namespace ffbench {

/// Dense polynomial, coefficient i multiplies x^i; no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational lead() const { return c_.back(); }

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const { return (*this)(x).sign(); }
  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Quotient and remainder; divisor must be nonzero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;

 private:
  void trim();
  std::vector<Rational> c_;
};

Polynomial gcd(Polynomial a, Polynomial b);

struct RootEnclosure {
  Rational lo;
  Rational hi;
  std::optional<Rational> exact;

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational width() const { return hi - lo; }
};

/// Every distinct real root, ascending, each enclosure at most eps wide.
std::vector<RootEnclosure> isolate_polynomial_roots(const Polynomial& p, const Rational& eps);

/// q(x) = 1 - (r - theta) x + (r - 2 theta) x^2 + theta x^3.
struct Cubic {
  Rational r;
  Rational theta;
  Polynomial q;
};

Cubic char_poly(const Rational& r, const Rational& theta);

Rational discriminant(const Rational& r, const Rational& theta);

/// The same discriminant specialised to theta = 1, as a polynomial in r.
Rational discriminant_theta_one(const Rational& r);

inline Rational default_eps() { return Rational(BigInt(1), BigInt(100'000'000)); }

/// Real roots labelled by order: three roots are alpha < gamma < beta, one root is alpha.
struct CubicRoots {
  Rational D;
  RootEnclosure alpha;
  std::optional<RootEnclosure> gamma;
  std::optional<RootEnclosure> beta;

  int real_count() const { return gamma ? 3 : 1; }
};

CubicRoots isolate_real_roots(const Cubic& c, const Rational& eps = default_eps());

struct Enclosure {
  Rational lo;
  Rational hi;
};

/// Encloses 1/(1 - gamma) - theta.
Enclosure feasibility_margin(const Rational& r, const Rational& theta, const Rational& eps = default_eps());

/// Sign of (theta + delta)(1 - gamma) - 1.
int c_sign(const Rational& r, const Rational& theta, const Rational& delta);

Rational boundary_curve_r(const Rational& theta);

struct AnalysisReport {
  Rational r;
  Rational theta;
  Rational D;
  std::optional<CubicRoots> roots;
  std::optional<Enclosure> margin;
};

/// Never throws on D <= 0; the report just omits what is undefined.
AnalysisReport analyze(const Rational& r, const Rational& theta, const Rational& eps = default_eps());

}  // namespace ffbench
