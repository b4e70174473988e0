#pragma once

#include <utility>
#include <vector>

#include "fpnc/minplus/curves.hpp"

namespace fpnc {

/// Piecewise-linear curve over [0, horizon] in double precision, used as an
/// independent brute-force oracle for the closed forms.
///
/// Breakpoints are sorted by time. Two consecutive points with the same time
/// encode a jump; the curve is left-continuous, so value() at a jump time returns
/// the first of the two and right_limit() the last. Beyond the horizon the curve
/// is extended with its final slope.
struct SampledCurve {
  std::vector<std::pair<double, double>> points;
  double horizon = 0;

  double value(double t) const;
  double right_limit(double t) const;
  double final_slope() const;
  /// inf { s >= 0 : value(s+) >= y }, +inf when never reached.
  double pseudo_inverse(double y) const;
  std::vector<double> times() const;
};

/// Sampling horizon covering all kinks: 4 * (latency + burst / min_rate).
double default_horizon(double total_latency, double total_burst, double min_rate);

SampledCurve sample_curve(const PseudoAffineCurve& curve, const Assignment& thetas, double horizon,
                          double step);
SampledCurve sample_curve(const TokenBucket& bucket, const Assignment& thetas, double horizon,
                          double step);

/// [beta(t) - alpha(t - theta)]^closure * 1{t > theta}, evaluated from the definition on
/// sampled operands. The closure runs over (theta, t].
SampledCurve sample_leftover_definition(const SampledCurve& beta, const SampledCurve& alpha,
                                        double theta, double step);

/// inf_{0<=u<=t} f(t-u) + g(u)
double numeric_convolve_at(const SampledCurve& f, const SampledCurve& g, double t);
/// sup_{u>=0} f(t+u) - g(u), u restricted to the horizon of g.
double numeric_deconvolve_at(const SampledCurve& f, const SampledCurve& g, double t);
/// Horizontal deviation sup_t inf{d >= 0 : f(t) <= g(t+d)}.
double numeric_hdev(const SampledCurve& arrival, const SampledCurve& service);
/// Vertical deviation sup_t f(t) - g(t).
double numeric_vdev(const SampledCurve& arrival, const SampledCurve& service);

}  // namespace fpnc
