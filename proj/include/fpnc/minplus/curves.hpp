#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpnc/minplus/affine.hpp"

namespace fpnc {

/// gamma_{r,b}: 0 at t = 0, b + r*t for t > 0.
struct TokenBucket {
  Rational rate = 0;
  AffineExpr burst;

  friend bool operator==(const TokenBucket&, const TokenBucket&) = default;
};

/// One affine piece sigma + rho * (t - D) of a pseudo-affine curve.
struct Stage {
  AffineExpr burst;
  Rational rate;

  friend bool operator==(const Stage&, const Stage&) = default;
};

/// delta_D (x) min_x gamma_{sigma_x, rho_x}.
///
/// The curve is 0 on [0, D] and min_x (sigma_x + rho_x * (t - D)) after D. An empty
/// stage list denotes the pure delay delta_D (infinite service after D); delta_0 is
/// the neutral element of convolution.
struct PseudoAffineCurve {
  AffineExpr latency;
  std::vector<Stage> stages;

  static PseudoAffineCurve rate_latency(const Rational& rate, const Rational& latency);
  static PseudoAffineCurve delay(AffineExpr latency);

  /// Smallest stage rate, or nullopt for a pure delay.
  std::optional<Rational> min_rate() const;
  bool is_concrete() const;
  /// Substitutes theta values everywhere.
  PseudoAffineCurve substitute(const Assignment& assignment) const;

  friend bool operator==(const PseudoAffineCurve&, const PseudoAffineCurve&) = default;
};

/// Conjunction of affine expressions, each required to be >= 0.
struct ConstraintSet {
  std::vector<AffineExpr> items;

  void add(AffineExpr e);
  void append(const ConstraintSet& other);
  bool satisfied_by(const Assignment& assignment) const;
  std::size_t size() const { return items.size(); }
};

/// base + max(0, max_i max_terms[i]).
struct DelayExpr {
  AffineExpr base;
  std::vector<AffineExpr> max_terms;

  Rational evaluate(const Assignment& assignment) const;
};

TokenBucket tb_aggregate(std::span<const TokenBucket> flows);

PseudoAffineCurve pa_convolve(const PseudoAffineCurve& a, const PseudoAffineCurve& b);

struct LeftoverCurve {
  PseudoAffineCurve curve;
  ConstraintSet constraints;
};

/// FIFO left-over service for a fixed theta variable, valid on the returned
/// constraint domain (theta >= D and all shifted stage bursts >= 0).
LeftoverCurve fifo_leftover(const PseudoAffineCurve& beta, const TokenBucket& cross, ThetaId theta);

/// Exact FIFO left-over of concrete curves at a concrete theta, including the
/// cases outside the constrained domain (theta < D, negative shifted bursts),
/// where the non-decreasing closure clips the curve at zero.
PseudoAffineCurve fifo_leftover_exact(const PseudoAffineCurve& beta, const TokenBucket& cross,
                                      const Rational& theta);

TokenBucket tb_deconvolve(const TokenBucket& alpha, const PseudoAffineCurve& beta);

DelayExpr hdev(const TokenBucket& alpha, const PseudoAffineCurve& beta);

AffineExpr vdev(const TokenBucket& alpha, const PseudoAffineCurve& beta);

/// Drops a stage only if another stage is provably below it for every theta:
/// rate not larger and burst smaller by a nonnegative constant.
PseudoAffineCurve prune_dominated(const PseudoAffineCurve& curve);

std::string to_string(const PseudoAffineCurve& curve);
std::string to_string(const TokenBucket& bucket);

}  // namespace fpnc
