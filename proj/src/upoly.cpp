#include "proofkit/upoly.hpp"

#include <stdexcept>

namespace proofkit {

UPoly::UPoly(const mpq_class& c) {
  if (c != 0) coeffs_.push_back(c);
}

UPoly UPoly::variable() {
  UPoly p;
  p.coeffs_ = {mpq_class(0), mpq_class(1)};
  return p;
}

UPoly UPoly::from_coeffs(std::vector<mpq_class> coeffs) {
  UPoly p;
  p.coeffs_ = std::move(coeffs);
  p.trim();
  return p;
}

void UPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpq_class UPoly::coeff(size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : mpq_class(0);
}

mpq_class UPoly::lead() const {
  return coeffs_.empty() ? mpq_class(0) : coeffs_.back();
}

mpq_class UPoly::eval(const mpq_class& point) const {
  mpq_class acc(0);
  for (size_t i = coeffs_.size(); i-- > 0;) {
    acc = acc * point + coeffs_[i];
  }
  return acc;
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), mpq_class(0));
  for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), mpq_class(0));
  for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  r += b;
  return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  r -= b;
  return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<mpq_class> out(a.coeffs_.size() + b.coeffs_.size() - 1, mpq_class(0));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return UPoly::from_coeffs(std::move(out));
}

void UPoly::divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  if (b.is_zero()) throw std::invalid_argument("UPoly::divmod by zero polynomial");
  q = UPoly();
  r = a;
  const long db = b.degree();
  const mpq_class lb = b.lead();
  while (!r.is_zero() && r.degree() >= db) {
    const long shift = r.degree() - db;
    const mpq_class factor = r.lead() / lb;
    std::vector<mpq_class> qc(static_cast<size_t>(shift) + 1, mpq_class(0));
    qc.back() = factor;
    UPoly term = UPoly::from_coeffs(std::move(qc));
    q += term;
    r -= term * b;
  }
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero() && a.lead() != 1) {
    const mpq_class inv = 1 / a.lead();
    for (auto& c : a.coeffs_) c *= inv;
  }
  return a;
}

std::string UPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (size_t i = coeffs_.size(); i-- > 0;) {
    const mpq_class& c = coeffs_[i];
    if (c == 0) continue;
    if (!out.empty()) out += c > 0 ? " + " : " - ";
    else if (c < 0) out += "-";
    const mpq_class a = abs(c);
    const bool unit = a == 1;
    if (i == 0 || !unit) out += a.get_str();
    if (i > 0) {
      if (!unit) out += "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace proofkit
