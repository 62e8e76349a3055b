#include "proofkit/ratfunc.hpp"

#include <stdexcept>

namespace proofkit {

RatFunc::RatFunc(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("RatFunc with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = UPoly(mpq_class(1));
    return;
  }
  UPoly g = UPoly::gcd(num_, den_);
  if (g.degree() > 0) {
    UPoly q, r;
    UPoly::divmod(num_, g, q, r);
    num_ = std::move(q);
    UPoly::divmod(den_, g, q, r);
    den_ = std::move(q);
  }
  const mpq_class lead = den_.lead();
  if (lead != 1) {
    const mpq_class inv = 1 / lead;
    num_ = num_ * UPoly(inv);
    den_ = den_ * UPoly(inv);
  }
}

RatFunc RatFunc::constant(const mpq_class& c) {
  RatFunc f;
  f.num_ = UPoly(c);
  return f;
}

RatFunc RatFunc::variable() {
  RatFunc f;
  f.num_ = UPoly::variable();
  return f;
}

bool RatFunc::is_variable() const {
  return den_.degree() == 0 && den_.lead() == 1 && num_ == UPoly::variable();
}

mpq_class RatFunc::as_rational() const {
  if (!is_rational()) throw std::invalid_argument("RatFunc is not a plain rational");
  return num_.coeff(0);
}

mpq_class RatFunc::eval(const mpq_class& point) const {
  const mpq_class d = den_.eval(point);
  if (d == 0) throw std::invalid_argument("RatFunc evaluated at a denominator root");
  return num_.eval(point) / d;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::invalid_argument("RatFunc division by zero");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RatFunc::str() const {
  if (den_.degree() == 0 && den_.lead() == 1) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace proofkit
