#include "fpnc/minplus/curves.hpp"

#include <algorithm>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

void require_stable(const Rational& arrival_rate, const PseudoAffineCurve& beta, bool strict) {
  auto min_rate = beta.min_rate();
  if (!min_rate) return;
  if (strict ? arrival_rate >= *min_rate : arrival_rate > *min_rate)
    throw InstabilityError("arrival rate " + format_rational(arrival_rate) +
                           " not below service rate " + format_rational(*min_rate));
}

}  // namespace

PseudoAffineCurve PseudoAffineCurve::rate_latency(const Rational& rate, const Rational& latency) {
  if (rate <= 0) throw UsageError("rate-latency curve needs a positive rate");
  if (latency < 0) throw UsageError("rate-latency curve needs a nonnegative latency");
  return PseudoAffineCurve{AffineExpr(latency), {Stage{AffineExpr(0), rate}}};
}

PseudoAffineCurve PseudoAffineCurve::delay(AffineExpr latency) {
  return PseudoAffineCurve{std::move(latency), {}};
}

std::optional<Rational> PseudoAffineCurve::min_rate() const {
  if (stages.empty()) return std::nullopt;
  Rational best = stages.front().rate;
  for (const auto& s : stages) best = std::min(best, s.rate);
  return best;
}

bool PseudoAffineCurve::is_concrete() const {
  if (!latency.is_constant()) return false;
  return std::all_of(stages.begin(), stages.end(),
                     [](const Stage& s) { return s.burst.is_constant(); });
}

PseudoAffineCurve PseudoAffineCurve::substitute(const Assignment& assignment) const {
  PseudoAffineCurve out{latency.substitute(assignment), {}};
  out.stages.reserve(stages.size());
  for (const auto& s : stages) out.stages.push_back({s.burst.substitute(assignment), s.rate});
  return out;
}

void ConstraintSet::add(AffineExpr e) {
  if (e.is_constant() && e.constant() >= 0) return;  // trivially true
  items.push_back(std::move(e));
}

void ConstraintSet::append(const ConstraintSet& other) {
  items.insert(items.end(), other.items.begin(), other.items.end());
}

bool ConstraintSet::satisfied_by(const Assignment& assignment) const {
  return std::all_of(items.begin(), items.end(),
                     [&](const AffineExpr& e) { return e.evaluate(assignment) >= 0; });
}

Rational DelayExpr::evaluate(const Assignment& assignment) const {
  Rational extra = 0;
  for (const auto& term : max_terms) extra = std::max(extra, term.evaluate(assignment));
  return base.evaluate(assignment) + extra;
}

TokenBucket tb_aggregate(std::span<const TokenBucket> flows) {
  if (flows.empty()) throw UsageError("aggregation of an empty flow set");
  TokenBucket sum;
  for (const auto& f : flows) {
    sum.rate += f.rate;
    sum.burst += f.burst;
  }
  return sum;
}

PseudoAffineCurve pa_convolve(const PseudoAffineCurve& a, const PseudoAffineCurve& b) {
  PseudoAffineCurve out{a.latency + b.latency, a.stages};
  out.stages.insert(out.stages.end(), b.stages.begin(), b.stages.end());
  return out;
}

LeftoverCurve fifo_leftover(const PseudoAffineCurve& beta, const TokenBucket& cross, ThetaId theta) {
  require_stable(cross.rate, beta, /*strict=*/true);
  const AffineExpr t = AffineExpr::variable(theta);
  const AffineExpr shift = t - beta.latency;

  LeftoverCurve out{PseudoAffineCurve{t, {}}, {}};
  out.constraints.add(shift);
  out.curve.stages.reserve(beta.stages.size());
  for (const auto& s : beta.stages) {
    AffineExpr burst = s.burst + shift * s.rate - cross.burst;
    out.constraints.add(burst);
    out.curve.stages.push_back({std::move(burst), s.rate - cross.rate});
  }
  return out;
}

PseudoAffineCurve fifo_leftover_exact(const PseudoAffineCurve& beta, const TokenBucket& cross,
                                      const Rational& theta) {
  if (!beta.is_concrete() || !cross.burst.is_constant())
    throw UsageError("exact left-over needs concrete curves");
  if (theta < 0) throw DomainError("negative theta");
  require_stable(cross.rate, beta, /*strict=*/true);

  const Rational& d = beta.latency.constant();
  const Rational& b = cross.burst.constant();
  const Rational start = std::max(theta, d);
  if (beta.stages.empty()) return PseudoAffineCurve::delay(AffineExpr(start));

  // After `start` every piece is sigma_x + rho_x (start - D) - b - r (start - theta)
  // growing at rho_x - r > 0; the closure clips the prefix where the minimum is negative.
  std::vector<Rational> offsets;
  Rational clip = 0;
  for (const auto& s : beta.stages) {
    Rational c = s.burst.constant() + s.rate * (start - d) - b - cross.rate * (start - theta);
    Rational slope = s.rate - cross.rate;
    if (c < 0) clip = std::max(clip, Rational(-c / slope));
    offsets.push_back(std::move(c));
  }
  PseudoAffineCurve out{AffineExpr(start + clip), {}};
  for (std::size_t i = 0; i < beta.stages.size(); ++i) {
    Rational slope = beta.stages[i].rate - cross.rate;
    out.stages.push_back({AffineExpr(offsets[i] + slope * clip), slope});
  }
  return out;
}

TokenBucket tb_deconvolve(const TokenBucket& alpha, const PseudoAffineCurve& beta) {
  require_stable(alpha.rate, beta, /*strict=*/false);
  return TokenBucket{alpha.rate, alpha.burst + beta.latency * alpha.rate};
}

DelayExpr hdev(const TokenBucket& alpha, const PseudoAffineCurve& beta) {
  require_stable(alpha.rate, beta, /*strict=*/false);
  DelayExpr out{beta.latency, {}};
  for (const auto& s : beta.stages) out.max_terms.push_back((alpha.burst - s.burst) / s.rate);
  return out;
}

AffineExpr vdev(const TokenBucket& alpha, const PseudoAffineCurve& beta) {
  return tb_deconvolve(alpha, beta).burst;
}

PseudoAffineCurve prune_dominated(const PseudoAffineCurve& curve) {
  PseudoAffineCurve out{curve.latency, {}};
  const auto& st = curve.stages;
  for (std::size_t i = 0; i < st.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < st.size() && !dominated; ++j) {
      if (i == j || st[j].rate > st[i].rate) continue;
      AffineExpr gap = st[i].burst - st[j].burst;
      if (!gap.is_constant() || gap.constant() < 0) continue;
      // Equal stages: keep the first occurrence only.
      bool equal = gap.constant() == 0 && st[j].rate == st[i].rate;
      dominated = !equal || j < i;
    }
    if (!dominated) out.stages.push_back(st[i]);
  }
  return out;
}

std::string to_string(const PseudoAffineCurve& curve) {
  std::string out = "delta[" + curve.latency.to_string() + "]";
  if (curve.stages.empty()) return out;
  out += " (x) min{";
  for (std::size_t i = 0; i < curve.stages.size(); ++i) {
    if (i) out += ", ";
    out += "gamma(" + format_rational(curve.stages[i].rate) + ", " +
           curve.stages[i].burst.to_string() + ")";
  }
  return out + "}";
}

std::string to_string(const TokenBucket& bucket) {
  return "gamma(" + format_rational(bucket.rate) + ", " + bucket.burst.to_string() + ")";
}

}  // namespace fpnc
