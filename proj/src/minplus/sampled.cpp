#include "fpnc/minplus/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpnc/errors.hpp"

namespace fpnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void push_point(std::vector<std::pair<double, double>>& pts, double t, double v) {
  if (!pts.empty() && pts.back().first == t && pts.back().second == v) return;
  pts.emplace_back(t, v);
}

std::vector<double> grid(double from, double to, double step) {
  std::vector<double> out;
  if (step <= 0) throw UsageError("sampling step must be positive");
  for (long k = 0;; ++k) {
    double t = from + static_cast<double>(k) * step;
    if (t > to) break;
    out.push_back(t);
  }
  out.push_back(to);
  return out;
}

void sort_unique(std::vector<double>& ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

}  // namespace

double SampledCurve::final_slope() const {
  for (std::size_t i = points.size(); i-- > 1;) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (b.first > a.first) return (b.second - a.second) / (b.first - a.first);
  }
  return 0;
}

double SampledCurve::value(double t) const {
  if (points.empty()) return 0;
  if (t <= points.front().first) return points.front().second;
  if (t > points.back().first) return points.back().second + final_slope() * (t - points.back().first);
  auto it = std::lower_bound(points.begin(), points.end(), t,
                             [](const auto& p, double x) { return p.first < x; });
  if (it->first == t) return it->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.second + (hi.second - lo.second) * (t - lo.first) / (hi.first - lo.first);
}

double SampledCurve::right_limit(double t) const {
  if (points.empty()) return 0;
  if (t < points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second + final_slope() * (t - points.back().first);
  auto it = std::upper_bound(points.begin(), points.end(), t,
                             [](double x, const auto& p) { return x < p.first; });
  const auto& lo = *(it - 1);
  if (lo.first == t) return lo.second;
  const auto& hi = *it;
  return lo.second + (hi.second - lo.second) * (t - lo.first) / (hi.first - lo.first);
}

double SampledCurve::pseudo_inverse(double y) const {
  if (points.empty()) return kInf;
  if (points.front().second >= y) return points.front().first;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& a = points[i];
    const auto& b = points[i + 1];
    if (b.second >= y) {
      if (b.first == a.first) return a.first;
      return a.first + (y - a.second) * (b.first - a.first) / (b.second - a.second);
    }
  }
  double slope = final_slope();
  if (slope <= 0) return kInf;
  return points.back().first + (y - points.back().second) / slope;
}

std::vector<double> SampledCurve::times() const {
  std::vector<double> ts;
  ts.reserve(points.size());
  for (const auto& p : points) ts.push_back(p.first);
  sort_unique(ts);
  return ts;
}

double default_horizon(double total_latency, double total_burst, double min_rate) {
  double h = 4.0 * (total_latency + (min_rate > 0 ? total_burst / min_rate : 0.0));
  return h > 0 ? h : 1.0;
}

SampledCurve sample_curve(const PseudoAffineCurve& curve, const Assignment& thetas, double horizon,
                          double step) {
  if (horizon <= 0) throw UsageError("sampling horizon must be positive");
  const double d = to_double(curve.latency.evaluate(thetas));
  std::vector<double> sigma, rho;
  for (const auto& s : curve.stages) {
    sigma.push_back(to_double(s.burst.evaluate(thetas)));
    rho.push_back(to_double(s.rate));
    if (sigma.back() < 0) throw DomainError("negative stage burst at this theta assignment");
  }
  if (d < 0) throw DomainError("negative latency at this theta assignment");

  auto envelope = [&](double t) {
    double v = kInf;
    for (std::size_t i = 0; i < sigma.size(); ++i) v = std::min(v, sigma[i] + rho[i] * (t - d));
    return v;
  };

  SampledCurve out;
  out.horizon = horizon;
  std::vector<double> ts = grid(0, horizon, step);
  ts.push_back(std::min(d, horizon));
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.size(); ++j) {
      if (rho[i] == rho[j]) continue;
      double x = d + (sigma[j] - sigma[i]) / (rho[i] - rho[j]);
      if (x > d && x < horizon) ts.push_back(x);
    }
  sort_unique(ts);

  for (double t : ts) {
    if (t <= d) {
      push_point(out.points, t, 0.0);
      if (t == d && !sigma.empty()) push_point(out.points, t, envelope(t));
    } else {
      // Pure delay: infinite after d; cap at a large finite value inside the horizon.
      push_point(out.points, t, sigma.empty() ? 1e300 : envelope(t));
    }
  }
  return out;
}

SampledCurve sample_curve(const TokenBucket& bucket, const Assignment& thetas, double horizon,
                          double step) {
  const double b = to_double(bucket.burst.evaluate(thetas));
  const double r = to_double(bucket.rate);
  if (b < 0) throw DomainError("negative burst at this theta assignment");
  SampledCurve out;
  out.horizon = horizon;
  push_point(out.points, 0.0, 0.0);
  push_point(out.points, 0.0, b);
  for (double t : grid(0, horizon, step))
    if (t > 0) push_point(out.points, t, b + r * t);
  return out;
}

SampledCurve sample_leftover_definition(const SampledCurve& beta, const SampledCurve& alpha,
                                        double theta, double step) {
  if (theta < 0) throw DomainError("negative theta");
  const double horizon = beta.horizon;
  std::vector<double> ts = grid(0, horizon, step);
  ts.push_back(theta);
  for (double t : beta.times())
    if (t > theta) ts.push_back(t);
  for (double t : alpha.times())
    if (t + theta <= horizon) ts.push_back(t + theta);
  sort_unique(ts);

  auto g_left = [&](double z) { return beta.value(z) - alpha.value(z - theta); };
  auto g_right = [&](double z) { return beta.right_limit(z) - alpha.right_limit(z - theta); };

  SampledCurve out;
  out.horizon = horizon;
  double running = -kInf;
  double prev_t = theta;
  double prev_right = 0;
  bool started = false;
  for (double t : ts) {
    if (t <= theta) {
      push_point(out.points, t, 0.0);
      continue;
    }
    if (!started) {
      running = g_right(theta);
      prev_right = running;
      started = true;
      push_point(out.points, theta, std::max(0.0, running));
    }
    double left = g_left(t);
    const double level = std::max(0.0, running);
    if (left > level && level > prev_right && t > prev_t) {
      // The plateau (closure or zero clip) ends inside (prev_t, t); emit the crossing point.
      double x = prev_t + (level - prev_right) * (t - prev_t) / (left - prev_right);
      push_point(out.points, x, level);
    }
    running = std::max(running, left);
    push_point(out.points, t, std::max(0.0, running));
    double right = g_right(t);
    running = std::max(running, right);
    push_point(out.points, t, std::max(0.0, running));
    prev_t = t;
    prev_right = right;
  }
  return out;
}

double numeric_convolve_at(const SampledCurve& f, const SampledCurve& g, double t) {
  std::vector<double> us{0.0, t};
  for (double x : g.times())
    if (x <= t) us.push_back(x);
  for (double x : f.times())
    if (x <= t) us.push_back(t - x);
  double best = kInf;
  for (double u : us) best = std::min(best, f.value(t - u) + g.value(u));
  return best;
}

double numeric_deconvolve_at(const SampledCurve& f, const SampledCurve& g, double t) {
  std::vector<double> us{0.0};
  double limit = std::max(0.0, g.horizon - t);
  us.push_back(limit);
  for (double x : g.times())
    if (x <= limit) us.push_back(x);
  for (double x : f.times())
    if (x >= t && x - t <= limit) us.push_back(x - t);
  double best = -kInf;
  for (double u : us) {
    best = std::max(best, f.value(t + u) - g.value(u));
    best = std::max(best, f.right_limit(t + u) - g.right_limit(u));
  }
  return best;
}

double numeric_hdev(const SampledCurve& arrival, const SampledCurve& service) {
  std::vector<double> ts = arrival.times();
  for (const auto& p : service.points) {
    double x = arrival.pseudo_inverse(p.second);
    if (std::isfinite(x) && x <= arrival.horizon) ts.push_back(x);
  }
  sort_unique(ts);
  double best = 0;
  for (double t : ts) {
    if (t > arrival.horizon) continue;
    for (double y : {arrival.value(t), arrival.right_limit(t)}) {
      double s = service.pseudo_inverse(y);
      if (!std::isfinite(s)) return kInf;
      best = std::max(best, s - t);
    }
  }
  return best;
}

double numeric_vdev(const SampledCurve& arrival, const SampledCurve& service) {
  std::vector<double> ts = arrival.times();
  for (double t : service.times()) ts.push_back(t);
  sort_unique(ts);
  double best = 0;
  for (double t : ts) {
    if (t > std::min(arrival.horizon, service.horizon)) continue;
    best = std::max(best, arrival.value(t) - service.value(t));
    best = std::max(best, arrival.right_limit(t) - service.right_limit(t));
  }
  return best;
}

}  // namespace fpnc
