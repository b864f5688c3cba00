#include "ffbench/roots.hpp"

#include <algorithm>

#include "ffbench/error.hpp"

namespace ffbench {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back().sign() == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(out));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
  if (d.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  std::vector<Rational> rem = c_;
  std::vector<Rational> quo(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0);
  for (std::size_t k = quo.size(); k-- > 0;) {
    const Rational f = rem[k + d.c_.size() - 1] / d.lead();
    quo[k] = f;
    for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= f * d.c_[j];
  }
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  std::vector<Rational> monic = a.coeffs();
  const Rational lead = a.lead();
  for (Rational& c : monic) c /= lead;
  return Polynomial(std::move(monic));
}

namespace {

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Polynomial r = chain[chain.size() - 2].divmod(chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(Polynomial() - r);
  }
  return chain;
}

int sign_changes(const std::vector<Polynomial>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const Polynomial& p : chain) {
    const int s = p.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Power of two strictly above every root's magnitude.
Rational root_bound(const Polynomial& p) {
  Rational m(0);
  for (int i = 0; i < p.degree(); ++i) m = max(m, abs(p.coeff(static_cast<std::size_t>(i)) / p.lead()));
  Rational b(1);
  while (b <= m + Rational(1)) b *= Rational(2);
  return b;
}

struct Isolator {
  const Polynomial& p;
  const std::vector<Polynomial>& chain;
  const Rational& eps;
  std::vector<RootEnclosure> out;

  // Roots in the open interval (a, b); `count` of them, p(a), p(b) nonzero.
  void split(const Rational& a, const Rational& b, int count) {
    if (count <= 0) return;
    if (count == 1) {
      refine(a, b);
      return;
    }
    const Rational m = (a + b) / Rational(2);
    const int vm = sign_changes(chain, m);
    const bool hit = p.sign_at(m) == 0;
    const int left = sign_changes(chain, a) - vm - (hit ? 1 : 0);
    split(a, m, left);
    if (hit) out.push_back({m, m, m});
    split(m, b, count - left - (hit ? 1 : 0));
  }

  // An endpoint may be a neighbouring exact root; p is square-free, so p' gives the sign just inside.
  void refine(Rational a, Rational b) {
    const Polynomial dp = p.derivative();
    const int sa = p.sign_at(a) != 0 ? p.sign_at(a) : dp.sign_at(a);
    while (eps < b - a || p.sign_at(a) == 0 || p.sign_at(b) == 0) {
      const Rational m = (a + b) / Rational(2);
      const int sm = p.sign_at(m);
      if (sm == 0) {
        out.push_back({m, m, m});
        return;
      }
      if (sm == sa) {
        a = m;
      } else {
        b = m;
      }
    }
    out.push_back({a, b, std::nullopt});
  }
};

}  // namespace

std::vector<RootEnclosure> isolate_polynomial_roots(const Polynomial& p, const Rational& eps) {
  if (eps.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (p.is_zero()) throw Error(ErrorKind::InvalidArgument, "the zero polynomial has every root");
  if (p.degree() == 0) return {};
  const Polynomial square_free = p.divmod(gcd(p, p.derivative())).first;
  const auto chain = sturm_chain(square_free);
  const Rational b = root_bound(square_free);
  Isolator iso{square_free, chain, eps, {}};
  iso.split(-b, b, sign_changes(chain, -b) - sign_changes(chain, b));
  return iso.out;
}

Cubic char_poly(const Rational& r, const Rational& theta) {
  if (theta.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  const Polynomial q1({Rational(1), theta - r, r - theta - theta, theta});
  // 1 + r x (x - 1) + theta x (x - 1)^2
  const Polynomial x({Rational(0), Rational(1)});
  const Polynomial xm1({Rational(-1), Rational(1)});
  const Polynomial q2 = Polynomial({Rational(1)}) + Polynomial({r}) * x * xm1 + Polynomial({theta}) * x * xm1 * xm1;
  if (!(q1 == q2)) throw Error(ErrorKind::Inconsistent, "the two forms of the characteristic cubic disagree");
  return {r, theta, q1};
}

Rational discriminant(const Rational& r, const Rational& t) {
  const Rational t2 = t * t;
  const Rational r2 = r * r;
  const Rational r3 = r2 * r;
  return Rational(-27) * t2 - Rational(4) * t2 * t + Rational(6) * t2 * r + Rational(6) * t * r2 + t2 * r2 -
         Rational(4) * r3 - Rational(2) * t * r3 + r3 * r;
}

Rational discriminant_theta_one(const Rational& r) {
  const Rational r2 = r * r;
  return Rational(-31) + Rational(6) * r + Rational(7) * r2 - Rational(6) * r2 * r + r2 * r2;
}

CubicRoots isolate_real_roots(const Cubic& c, const Rational& eps) {
  const Rational D = discriminant(c.r, c.theta);
  if (D.sign() == 0) throw Error(ErrorKind::DiscriminantZero, "repeated root at r " + c.r.str() + ", theta " + c.theta.str());
  const auto roots = isolate_polynomial_roots(c.q, eps);
  const std::size_t want = D.sign() > 0 ? 3 : 1;
  if (roots.size() != want) {
    throw Error(ErrorKind::Inconsistent, "found " + std::to_string(roots.size()) + " real roots, discriminant says " +
                                             std::to_string(want));
  }
  CubicRoots out{D, roots[0], std::nullopt, std::nullopt};
  if (want == 3) {
    out.gamma = roots[1];
    out.beta = roots[2];
  }
  return out;
}

namespace {

RootEnclosure gamma_of(const Rational& r, const Rational& theta, const Rational& eps) {
  const Rational D = discriminant(r, theta);
  if (D.sign() == 0) throw Error(ErrorKind::DiscriminantZero, "repeated root");
  if (D.sign() < 0) throw Error(ErrorKind::ComplexRoots, "gamma is not real at r " + r.str() + ", theta " + theta.str());
  return *isolate_real_roots(char_poly(r, theta), eps).gamma;
}

}  // namespace

Enclosure feasibility_margin(const Rational& r, const Rational& theta, const Rational& eps) {
  const RootEnclosure g = gamma_of(r, theta, eps);
  const Rational one(1);
  return {one / (one - g.lo) - theta, one / (one - g.hi) - theta};
}

int c_sign(const Rational& r, const Rational& theta, const Rational& delta) {
  const RootEnclosure g = gamma_of(r, theta, default_eps());
  const Rational target = Rational(1) - Rational(1) / (theta + delta);
  if (g.exact) return (target - *g.exact).sign();
  if (target <= g.lo) return -1;
  if (g.hi <= target) return 1;
  const Polynomial& q = char_poly(r, theta).q;
  const int at = q.sign_at(target);
  if (at == 0) return 0;
  return at == q.sign_at(g.lo) ? -1 : 1;
}

Rational boundary_curve_r(const Rational& theta) {
  if (theta <= Rational(1)) throw Error(ErrorKind::OutOfDomain, "boundary curve needs theta > 1");
  return Rational(1) + theta * theta / (theta - Rational(1));
}

AnalysisReport analyze(const Rational& r, const Rational& theta, const Rational& eps) {
  AnalysisReport rep{r, theta, discriminant(r, theta), std::nullopt, std::nullopt};
  if (rep.D.sign() == 0) return rep;
  rep.roots = isolate_real_roots(char_poly(r, theta), eps);
  if (rep.roots->gamma) {
    const RootEnclosure& g = *rep.roots->gamma;
    const Rational one(1);
    rep.margin = Enclosure{one / (one - g.lo) - theta, one / (one - g.hi) - theta};
  }
  return rep;
}

}  // namespace ffbench
