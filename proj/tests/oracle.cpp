#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpnc/minplus/sampled.hpp"
#include "support.hpp"

namespace fpnc::testing {

namespace {

double total_burst(const PseudoAffineCurve& c) {
  double s = 0;
  for (const auto& st : c.stages) s += to_double(st.burst.constant());
  return s;
}

double horizon_for(const PseudoAffineCurve& c, const TokenBucket& a) {
  return default_horizon(to_double(c.latency.constant()),
                         total_burst(c) + to_double(a.burst.constant()), to_double(*c.min_rate()));
}

// Grid avoiding exact breakpoints: an irrational-ish step.
std::vector<double> probe_times(double horizon) {
  std::vector<double> ts;
  const double step = horizon / 211.0 * 1.000173;
  for (double t = step / 3; t < horizon; t += step) ts.push_back(t);
  return ts;
}

}  // namespace

double curve_value(const PseudoAffineCurve& c, double t) {
  double d = to_double(c.latency.constant());
  if (t <= d) return 0;
  if (c.stages.empty()) return std::numeric_limits<double>::infinity();
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : c.stages) v = std::min(v, to_double(s.burst.constant()) + to_double(s.rate) * (t - d));
  return v;
}

PseudoAffineCurve random_curve(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  PseudoAffineCurve c;
  c.latency = random_rational(rng, 1, 1000, 1000);
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Rational sigma = i == 0 ? Rational(0) : random_rational(rng, 1, 1000, 1000);
    c.stages.push_back({AffineExpr(sigma), random_rational(rng, 1, 1000, 1000)});
  }
  return c;
}

TokenBucket random_bucket(std::mt19937_64& rng, const Rational& max_rate) {
  Rational fraction = random_rational(rng, 1, 999, 1000);
  return TokenBucket{max_rate * fraction, AffineExpr(random_rational(rng, 1, 1000, 1000))};
}

double check_convolve(std::mt19937_64& rng) {
  auto a = random_curve(rng);
  auto b = random_curve(rng);
  auto c = pa_convolve(a, b);
  double h = default_horizon(to_double(c.latency.constant()), total_burst(a) + total_burst(b),
                             to_double(*c.min_rate()));
  auto sa = sample_curve(a, {}, h, h / 97);
  auto sb = sample_curve(b, {}, h, h / 97);
  double worst = 0;
  for (double t : probe_times(h)) worst = std::max(worst, relative_error(curve_value(c, t), numeric_convolve_at(sa, sb, t)));
  return worst;
}

double check_leftover(std::mt19937_64& rng) {
  auto beta = random_curve(rng);
  auto cross = random_bucket(rng, *beta.min_rate());
  const ThetaId id{1};
  auto lo = fifo_leftover(beta, cross, id);

  // Smallest theta of the constrained domain plus a random margin.
  Rational theta = beta.latency.constant();
  for (const auto& s : beta.stages) {
    Rational need = beta.latency.constant() + (cross.burst.constant() - s.burst.constant()) / s.rate;
    theta = std::max(theta, need);
  }
  theta += random_rational(rng, 0, 1000, 1000);
  Assignment at{{id, theta}};
  if (!lo.constraints.satisfied_by(at)) return 1.0;

  auto closed = lo.curve.substitute(at);
  double h = horizon_for(closed, cross) + to_double(theta);
  auto def = sample_leftover_definition(sample_curve(beta, {}, h, h / 97), sample_curve(cross, {}, h, h / 97),
                                        to_double(theta), h / 97);
  double worst = 0;
  for (double t : probe_times(h)) worst = std::max(worst, relative_error(curve_value(closed, t), def.value(t)));
  return worst;
}

double check_exact_leftover(std::mt19937_64& rng) {
  auto beta = random_curve(rng);
  auto cross = random_bucket(rng, *beta.min_rate());
  Rational theta = random_rational(rng, 0, 3000, 1000);
  auto exact = fifo_leftover_exact(beta, cross, theta);
  double h = horizon_for(exact, cross) + to_double(theta);
  auto def = sample_leftover_definition(sample_curve(beta, {}, h, h / 97), sample_curve(cross, {}, h, h / 97),
                                        to_double(theta), h / 97);
  double worst = 0;
  for (double t : probe_times(h)) worst = std::max(worst, relative_error(curve_value(exact, t), def.value(t)));
  return worst;
}

double check_deconvolve(std::mt19937_64& rng) {
  auto beta = random_curve(rng);
  auto alpha = random_bucket(rng, *beta.min_rate());
  auto out = tb_deconvolve(alpha, beta);
  double h = horizon_for(beta, alpha);
  auto sa = sample_curve(alpha, {}, 2 * h, h / 97);
  auto sb = sample_curve(beta, {}, 2 * h, h / 97);
  double worst = relative_error(to_double(out.burst.constant()), numeric_deconvolve_at(sa, sb, 0));
  for (double t : probe_times(h / 2)) {
    double closed = to_double(out.burst.constant()) + to_double(out.rate) * t;
    worst = std::max(worst, relative_error(closed, numeric_deconvolve_at(sa, sb, t)));
  }
  return worst;
}

double check_hdev(std::mt19937_64& rng) {
  auto beta = random_curve(rng);
  auto alpha = random_bucket(rng, *beta.min_rate());
  double closed = to_double(hdev(alpha, beta).evaluate({}));
  double h = horizon_for(beta, alpha);
  double numeric = numeric_hdev(sample_curve(alpha, {}, h, h / 97), sample_curve(beta, {}, 2 * h, h / 97));
  return relative_error(closed, numeric);
}

double check_vdev(std::mt19937_64& rng) {
  auto beta = random_curve(rng);
  auto alpha = random_bucket(rng, *beta.min_rate());
  double closed = to_double(vdev(alpha, beta).evaluate({}));
  double h = horizon_for(beta, alpha);
  double numeric = numeric_vdev(sample_curve(alpha, {}, h, h / 97), sample_curve(beta, {}, h, h / 97));
  return relative_error(closed, numeric);
}

}  // namespace fpnc::testing
