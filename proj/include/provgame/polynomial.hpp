#pragma once

/// Provenance polynomials: finite maps from monomials to positive
/// natural coefficients, with the three annotation algebras used by the
/// engine layered on top of one arithmetic core:
///
///   nx    plain polynomial arithmetic
///   bx    coefficients and exponents capped at 1 (Boolean polynomials)
///   triox exponents capped at 1, coefficients kept
///
/// Both caps are congruences, so they are applied after every operation
/// without changing the end result.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "provgame/errors.hpp"

namespace provgame {

enum class semiring : std::uint8_t { nx, bx, triox };

/// Product of annotation variables with positive exponents. Compared by
/// the expanded variable sequence (each variable repeated per its
/// exponent), so p^3 sorts before p*q*r.
class monomial {
 public:
  static monomial unit() { return monomial(); }

  static monomial variable(const std::string& name) {
    monomial m;
    m.exps_.emplace(name, 1);
    return m;
  }

  bool is_unit() const { return exps_.empty(); }

  const std::map<std::string, int>& exponents() const { return exps_; }

  monomial times(const monomial& other) const {
    monomial out = *this;
    for (const auto& [v, e] : other.exps_) out.exps_[v] += e;
    return out;
  }

  monomial cap_exponents() const {
    monomial out;
    for (const auto& [v, _] : exps_) out.exps_.emplace(v, 1);
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : exps_) {
      if (!first) os << "*";
      first = false;
      os << v;
      if (e > 1) os << "^" << e;
    }
    return os.str();
  }

  friend bool operator==(const monomial& a, const monomial& b) {
    return a.exps_ == b.exps_;
  }
  friend bool operator!=(const monomial& a, const monomial& b) {
    return !(a == b);
  }

  friend bool operator<(const monomial& a, const monomial& b) {
    auto ia = a.exps_.begin(), ib = b.exps_.begin();
    int ra = 0, rb = 0;  // variable repetitions left at the iterators
    while (true) {
      if (ia != a.exps_.end() && ra == 0) ra = ia->second;
      if (ib != b.exps_.end() && rb == 0) rb = ib->second;
      bool ea = (ia == a.exps_.end());
      bool eb = (ib == b.exps_.end());
      if (ea || eb) return !ea ? false : !eb;  // shorter sequence first
      if (ia->first != ib->first) return ia->first < ib->first;
      int step = ra < rb ? ra : rb;
      ra -= step;
      rb -= step;
      if (ra == 0) ++ia;
      if (rb == 0) ++ib;
    }
  }

 private:
  std::map<std::string, int> exps_;
};

class polynomial {
 public:
  using coefficient = std::uint64_t;

  static polynomial zero() { return polynomial(); }

  static polynomial one() { return constant(1); }

  static polynomial constant(coefficient c) {
    polynomial p;
    if (c != 0) p.terms_.emplace(monomial::unit(), c);
    return p;
  }

  static polynomial variable(const std::string& name) {
    polynomial p;
    p.terms_.emplace(monomial::variable(name), 1);
    return p;
  }

  bool is_zero() const { return terms_.empty(); }

  const std::map<monomial, coefficient>& terms() const { return terms_; }

  polynomial plus(const polynomial& other, semiring k = semiring::nx) const {
    polynomial out = *this;
    for (const auto& [m, c] : other.terms_) out.terms_[m] += c;
    out.normalize(k);
    return out;
  }

  polynomial times(const polynomial& other, semiring k = semiring::nx) const {
    polynomial out;
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : other.terms_)
        out.terms_[ma.times(mb)] += ca * cb;
    out.normalize(k);
    return out;
  }

  /// Quotient into the coarser algebra; capping merges monomials that
  /// become equal, summing their coefficients first.
  polynomial in_semiring(semiring k) const {
    polynomial out = *this;
    out.normalize(k);
    return out;
  }

  /// Canonical text: monomials in their natural order, "*"-joined
  /// variables, "^" exponents, coefficient prefix only when above 1.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (m.is_unit()) {
        os << c;
      } else {
        if (c != 1) os << c << "*";
        os << m.to_string();
      }
    }
    return os.str();
  }

  friend bool operator==(const polynomial& a, const polynomial& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const polynomial& a, const polynomial& b) {
    return !(a == b);
  }

 private:
  void normalize(semiring k) {
    if (k != semiring::nx) {
      std::map<monomial, coefficient> capped;
      for (const auto& [m, c] : terms_) capped[m.cap_exponents()] += c;
      terms_ = std::move(capped);
      if (k == semiring::bx)
        for (auto& [_, c] : terms_) c = 1;
    }
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second == 0 ? terms_.erase(it) : std::next(it);
  }

  std::map<monomial, coefficient> terms_;
};

inline std::string to_string(semiring k) {
  switch (k) {
    case semiring::nx:
      return "nx";
    case semiring::bx:
      return "bx";
    case semiring::triox:
      return "trio";
  }
  throw internal_error("invalid semiring");
}

}  // namespace provgame
