#include "proofkit/sparse_poly.hpp"

#include <optional>
#include <sstream>

#include "proofkit/errors.hpp"

namespace proofkit {

namespace {

mpq_class mod_reduce(const mpq_class& v, const mpz_class& p) {
  // GF coefficients are integral; fold a rational via the inverse of its denominator.
  mpz_class num = v.get_num() % p;
  if (num < 0) num += p;
  if (v.get_den() == 1) return mpq_class(num);
  mpz_class den = v.get_den() % p;
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0) {
    throw RingMismatch("coefficient denominator is not invertible modulo " + p.get_str());
  }
  mpz_class r = (num * inv) % p;
  if (r < 0) r += p;
  return mpq_class(r);
}

const mpq_class& as_q(const Coeff& c) {
  if (!std::holds_alternative<mpq_class>(c)) {
    throw RingMismatch("expected a rational coefficient");
  }
  return std::get<mpq_class>(c);
}

const RatFunc& as_rf(const Coeff& c) {
  if (!std::holds_alternative<RatFunc>(c)) {
    throw RingMismatch("expected a rational-function coefficient");
  }
  return std::get<RatFunc>(c);
}

}  // namespace

Coeff coeff_zero(const Ring& ring) {
  if (ring.tag == RingTag::RationalFunctionField) return RatFunc();
  return mpq_class(0);
}

Coeff coeff_one(const Ring& ring) {
  if (ring.tag == RingTag::RationalFunctionField) return RatFunc::constant(mpq_class(1));
  return mpq_class(1);
}

Coeff coeff_canon(const Ring& ring, Coeff c) {
  switch (ring.tag) {
    case RingTag::RationalFunctionField:
      if (std::holds_alternative<mpq_class>(c)) {
        return RatFunc::constant(std::get<mpq_class>(c));
      }
      return c;
    case RingTag::PrimeField:
      return mod_reduce(as_q(c), ring.modulus);
    case RingTag::IntegerRing:
      if (as_q(c).get_den() != 1) {
        throw RingMismatch("non-integer coefficient over Z");
      }
      return c;
    case RingTag::RationalField:
      as_q(c);
      return c;
  }
  throw RingMismatch("unknown ring");
}

Coeff coeff_add(const Ring& ring, const Coeff& a, const Coeff& b) {
  if (ring.tag == RingTag::RationalFunctionField) return as_rf(a) + as_rf(b);
  mpq_class r = as_q(a) + as_q(b);
  if (ring.tag == RingTag::PrimeField) return mod_reduce(r, ring.modulus);
  return r;
}

Coeff coeff_mul(const Ring& ring, const Coeff& a, const Coeff& b) {
  if (ring.tag == RingTag::RationalFunctionField) return as_rf(a) * as_rf(b);
  mpq_class r = as_q(a) * as_q(b);
  if (ring.tag == RingTag::PrimeField) return mod_reduce(r, ring.modulus);
  return r;
}

Coeff coeff_neg(const Ring& ring, const Coeff& a) {
  if (ring.tag == RingTag::RationalFunctionField) return -as_rf(a);
  mpq_class r = -as_q(a);
  if (ring.tag == RingTag::PrimeField) return mod_reduce(r, ring.modulus);
  return r;
}

Coeff coeff_inv(const Ring& ring, const Coeff& a) {
  if (coeff_is_zero(a)) throw Error("inverse of a zero coefficient");
  switch (ring.tag) {
    case RingTag::RationalFunctionField: {
      return RatFunc(as_rf(a).den(), as_rf(a).num());
    }
    case RingTag::PrimeField: {
      mpq_class inv(1);
      inv /= as_q(a);
      return mod_reduce(inv, ring.modulus);
    }
    case RingTag::RationalField: {
      mpq_class inv(1);
      inv /= as_q(a);
      return inv;
    }
    case RingTag::IntegerRing:
      throw RingMismatch("division is not available over Z");
  }
  throw RingMismatch("unknown ring");
}

bool coeff_is_zero(const Coeff& c) {
  if (std::holds_alternative<mpq_class>(c)) return std::get<mpq_class>(c) == 0;
  return std::get<RatFunc>(c).is_zero();
}

bool coeff_eq(const Coeff& a, const Coeff& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<mpq_class>(a)) return std::get<mpq_class>(a) == std::get<mpq_class>(b);
  return std::get<RatFunc>(a) == std::get<RatFunc>(b);
}

std::string coeff_str(const Coeff& c) {
  if (std::holds_alternative<mpq_class>(c)) return std::get<mpq_class>(c).get_str();
  return std::get<RatFunc>(c).str();
}

bool SparsePoly::TermOrder::operator()(const Exps& a, const Exps& b) const {
  unsigned long da = 0, db = 0;
  for (uint32_t e : a) da += e;
  for (uint32_t e : b) db += e;
  if (da != db) return da > db;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() > b.size();
}

SparsePoly::SparsePoly(Ring ring, std::vector<std::string> var_names)
    : ring_(std::move(ring)), var_names_(std::move(var_names)) {}

SparsePoly SparsePoly::constant(Ring ring, std::vector<std::string> var_names, Coeff c) {
  SparsePoly p(std::move(ring), std::move(var_names));
  p.add_term(Exps(p.nvars(), 0), coeff_canon(p.ring_, std::move(c)));
  return p;
}

SparsePoly SparsePoly::variable(Ring ring, std::vector<std::string> var_names, uint32_t index) {
  SparsePoly p(std::move(ring), std::move(var_names));
  if (index >= p.nvars()) throw Error("variable index out of range");
  Exps e(p.nvars(), 0);
  e[index] = 1;
  p.add_term(e, coeff_one(p.ring_));
  return p;
}

mpz_class SparsePoly::total_degree() const {
  if (terms_.empty()) return 0;
  unsigned long d = 0;
  for (uint32_t e : terms_.begin()->first) d += e;
  return mpz_class(d);
}

Coeff SparsePoly::coeff_at(const Exps& e) const {
  auto it = terms_.find(e);
  if (it == terms_.end()) return coeff_zero(ring_);
  return it->second;
}

void SparsePoly::add_term(const Exps& e, const Coeff& delta) {
  if (e.size() != var_names_.size()) throw Error("monomial arity mismatch");
  if (coeff_is_zero(delta)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    Coeff c = coeff_canon(ring_, delta);
    if (!coeff_is_zero(c)) terms_.emplace(e, std::move(c));
    return;
  }
  it->second = coeff_add(ring_, it->second, delta);
  if (coeff_is_zero(it->second)) terms_.erase(it);
}

void SparsePoly::check_compatible(const SparsePoly& o) const {
  if (!(ring_ == o.ring_) || var_names_ != o.var_names_) {
    throw VariableMismatch("polynomial operands disagree on ring or variables");
  }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, coeff_neg(ring_, c));
  return *this;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  SparsePoly r = *this;
  r += o;
  return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  SparsePoly r = *this;
  r -= o;
  return r;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  check_compatible(o);
  SparsePoly r(ring_, var_names_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, coeff_mul(ring_, ca, cb));
    }
  }
  return r;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r(ring_, var_names_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, coeff_neg(ring_, c));
  return r;
}

SparsePoly SparsePoly::scaled(const Coeff& k) const {
  SparsePoly r(ring_, var_names_);
  if (coeff_is_zero(k)) return r;
  for (const auto& [e, c] : terms_) r.add_term(e, coeff_mul(ring_, c, k));
  return r;
}

SparsePoly SparsePoly::mul_monomial(const Exps& m, const Coeff& k) const {
  if (m.size() != var_names_.size()) throw Error("monomial arity mismatch");
  SparsePoly r(ring_, var_names_);
  if (coeff_is_zero(k)) return r;
  for (const auto& [e, c] : terms_) {
    Exps me(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) me[i] = e[i] + m[i];
    r.add_term(me, coeff_mul(ring_, c, k));
  }
  return r;
}

bool SparsePoly::operator==(const SparsePoly& o) const {
  if (!(ring_ == o.ring_) || var_names_ != o.var_names_) return false;
  if (terms_.size() != o.terms_.size()) return false;
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt) {
    if (it->first != jt->first || !coeff_eq(it->second, jt->second)) return false;
  }
  return true;
}

Coeff SparsePoly::eval(const std::vector<Coeff>& point) const {
  if (point.size() != var_names_.size()) throw Error("evaluation point arity mismatch");
  Coeff acc = coeff_zero(ring_);
  for (const auto& [e, c] : terms_) {
    Coeff t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (uint32_t k = 0; k < e[i]; ++k) t = coeff_mul(ring_, t, point[i]);
    }
    acc = coeff_add(ring_, acc, t);
  }
  return acc;
}

std::string SparsePoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << coeff_str(c) << ")";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*" << var_names_[i];
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

SparsePoly poly_with_var_space(const SparsePoly& p, std::vector<std::string> names) {
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < names.size(); ++i) idx[names[i]] = i;
  std::vector<std::optional<size_t>> to(p.nvars());
  for (size_t i = 0; i < p.nvars(); ++i) {
    auto it = idx.find(p.var_names()[i]);
    if (it != idx.end()) to[i] = it->second;
  }
  SparsePoly out(p.ring(), std::move(names));
  for (const auto& [e, c] : p.terms()) {
    SparsePoly::Exps ne(out.nvars(), 0);
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!to[i]) {
        throw VariableMismatch("variable " + p.var_names()[i] + " missing from the new space");
      }
      ne[*to[i]] = e[i];
    }
    out.add_term(ne, c);
  }
  return out;
}

std::string poly_to_lines(const SparsePoly& p) {
  std::ostringstream os;
  for (const auto& [e, c] : p.terms()) {
    if (std::holds_alternative<RatFunc>(c)) {
      throw Error("rational-function coefficients have no textual polynomial form");
    }
    os << std::get<mpq_class>(c).get_str();
    for (uint32_t x : e) os << " " << x;
    os << "\n";
  }
  return os.str();
}

SparsePoly poly_from_lines(const std::string& text, const Ring& ring,
                           std::vector<std::string> var_names) {
  SparsePoly p(ring, std::move(var_names));
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string coeff_tok;
    if (!(ls >> coeff_tok)) continue;
    mpq_class c;
    try {
      c = mpq_class(coeff_tok);
      c.canonicalize();
    } catch (const std::invalid_argument&) {
      throw SyntaxError(lineno, "bad coefficient '" + coeff_tok + "'");
    }
    SparsePoly::Exps e;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        e.push_back(static_cast<uint32_t>(v));
      } catch (const std::exception&) {
        throw SyntaxError(lineno, "bad exponent '" + tok + "'");
      }
    }
    if (e.size() != p.var_names().size()) {
      throw SyntaxError(lineno, "expected one exponent per variable");
    }
    p.add_term(e, mpq_class(c));
  }
  return p;
}

}  // namespace proofkit
