#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "fpnc/rational.hpp"

namespace fpnc {

/// Identifier of a free parameter (theta, or an auxiliary LP variable).
struct ThetaId {
  std::uint32_t value = 0;
  auto operator<=>(const ThetaId&) const = default;
};

using Assignment = std::map<ThetaId, Rational>;

/// constant + sum_i coefficient_i * theta_i, exact. Zero coefficients are never stored.
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(Rational constant);  // NOLINT: implicit on purpose, constants are expressions
  AffineExpr(long constant) : AffineExpr(Rational(constant)) {}  // NOLINT

  static AffineExpr variable(ThetaId id, const Rational& coefficient = 1);

  const Rational& constant() const { return constant_; }
  const std::map<ThetaId, Rational>& coefficients() const { return coefficients_; }
  Rational coefficient(ThetaId id) const;
  bool is_constant() const { return coefficients_.empty(); }

  /// Throws DomainError when a referenced variable is missing from the assignment.
  Rational evaluate(const Assignment& assignment) const;
  /// Substitutes the given variables, leaving the rest symbolic.
  AffineExpr substitute(const Assignment& assignment) const;

  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator-=(const AffineExpr& other);
  AffineExpr& operator*=(const Rational& factor);
  AffineExpr& operator/=(const Rational& divisor);

  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(AffineExpr a, const Rational& k) { return a *= k; }
  friend AffineExpr operator*(const Rational& k, AffineExpr a) { return a *= k; }
  friend AffineExpr operator/(AffineExpr a, const Rational& k) { return a /= k; }
  AffineExpr operator-() const;

  friend bool operator==(const AffineExpr& a, const AffineExpr& b) {
    return a.constant_ == b.constant_ && a.coefficients_ == b.coefficients_;
  }

  /// e.g. "3/2 + 40*t3 - t7"
  std::string to_string() const;

 private:
  void add_term(ThetaId id, const Rational& coefficient);

  Rational constant_ = 0;
  std::map<ThetaId, Rational> coefficients_;
};

}  // namespace fpnc
