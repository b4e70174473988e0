#include "fpnc/minplus/affine.hpp"

#include "fpnc/errors.hpp"

namespace fpnc {

AffineExpr::AffineExpr(Rational constant) : constant_(std::move(constant)) {}

AffineExpr AffineExpr::variable(ThetaId id, const Rational& coefficient) {
  AffineExpr e;
  e.add_term(id, coefficient);
  return e;
}

Rational AffineExpr::coefficient(ThetaId id) const {
  auto it = coefficients_.find(id);
  return it == coefficients_.end() ? Rational(0) : it->second;
}

Rational AffineExpr::evaluate(const Assignment& assignment) const {
  Rational value = constant_;
  for (const auto& [id, c] : coefficients_) {
    auto it = assignment.find(id);
    if (it == assignment.end())
      throw DomainError("no value for theta " + std::to_string(id.value));
    value += c * it->second;
  }
  return value;
}

AffineExpr AffineExpr::substitute(const Assignment& assignment) const {
  AffineExpr out(constant_);
  for (const auto& [id, c] : coefficients_) {
    auto it = assignment.find(id);
    if (it == assignment.end())
      out.add_term(id, c);
    else
      out.constant_ += c * it->second;
  }
  return out;
}

void AffineExpr::add_term(ThetaId id, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = coefficients_.try_emplace(id, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) coefficients_.erase(it);
  }
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  constant_ += other.constant_;
  for (const auto& [id, c] : other.coefficients_) add_term(id, c);
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) {
  constant_ -= other.constant_;
  for (const auto& [id, c] : other.coefficients_) add_term(id, -c);
  return *this;
}

AffineExpr& AffineExpr::operator*=(const Rational& factor) {
  if (factor == 0) {
    constant_ = 0;
    coefficients_.clear();
    return *this;
  }
  constant_ *= factor;
  for (auto& [id, c] : coefficients_) c *= factor;
  return *this;
}

AffineExpr& AffineExpr::operator/=(const Rational& divisor) {
  if (divisor == 0) throw std::domain_error("division of affine expression by zero");
  return *this *= Rational(1) / divisor;
}

AffineExpr AffineExpr::operator-() const {
  AffineExpr e = *this;
  e *= Rational(-1);
  return e;
}

std::string AffineExpr::to_string() const {
  std::string out;
  if (constant_ != 0 || coefficients_.empty()) out = format_rational(constant_);
  for (const auto& [id, c] : coefficients_) {
    Rational mag = abs(c);
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    if (mag != 1) out += format_rational(mag) + "*";
    out += "t" + std::to_string(id.value);
  }
  return out;
}

}  // namespace fpnc
