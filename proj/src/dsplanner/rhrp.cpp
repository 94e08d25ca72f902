#include "nav2d/dsplanner/rhrp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace nav2d::ds {

using geom::Point2;

namespace {

constexpr int kIntegrationSteps = 200;
constexpr int kMaxSplitDepth = 6;

double horner(const std::array<double, 7>& c, double u) {
  double acc = 0.0;
  for (int i = 6; i >= 0; --i) acc = acc * u + c[i];
  return acc;
}

// Least-squares polynomial fit of the samples in [first, last] over the
// normalized coordinate; degree shrinks when samples are scarce.
PolySegment fit_segment(const std::vector<RhrpSample>& samples, std::size_t first,
                        std::size_t last, double* residual) {
  PolySegment seg;
  seg.s0 = samples[first].s;
  seg.s1 = samples[last].s;
  const std::size_t n = last - first + 1;
  const double span = std::max(seg.s1 - seg.s0, 1e-12);
  const int degree = std::min<int>(6, static_cast<int>(n) - 1);

  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd bx(n), by(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (samples[first + i].s - seg.s0) / span;
    double pw = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(i, d) = pw;
      pw *= u;
    }
    bx(i) = samples[first + i].r.x;
    by(i) = samples[first + i].r.y;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::VectorXd cx = qr.solve(bx);
  const Eigen::VectorXd cy = qr.solve(by);
  for (int d = 0; d <= degree; ++d) {
    seg.cx[d] = cx(d);
    seg.cy[d] = cy(d);
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (samples[first + i].s - seg.s0) / span;
    const Point2 fit{horner(seg.cx, u), horner(seg.cy, u)};
    worst = std::max(worst, geom::distance(fit, samples[first + i].r));
  }
  *residual = worst;
  return seg;
}

void fit_recursive(const std::vector<RhrpSample>& samples, std::size_t first, std::size_t last,
                   double bound, int depth, std::vector<PolySegment>* out, double* worst) {
  double residual = 0.0;
  PolySegment seg = fit_segment(samples, first, last, &residual);
  if (residual <= bound || depth >= kMaxSplitDepth || last - first < 8) {
    *worst = std::max(*worst, residual);
    out->push_back(seg);
    return;
  }
  const std::size_t mid = first + (last - first) / 2;
  fit_recursive(samples, first, mid, bound, depth + 1, out, worst);
  fit_recursive(samples, mid, last, bound, depth + 1, out, worst);
}

}  // namespace

Rhrp Rhrp::singleton(const Point2& goal, double rho) {
  Rhrp p;
  p.samples_ = {RhrpSample{0.0, goal}};
  p.length_ = 0.0;
  p.rho_ = rho;
  p.goal_ = goal;
  PolySegment seg;
  seg.s0 = 0.0;
  seg.s1 = 1.0;  // constant on any query
  seg.cx[0] = goal.x;
  seg.cy[0] = goal.y;
  p.segments_ = {seg};
  return p;
}

Rhrp Rhrp::from_samples(std::vector<RhrpSample> samples, double rho, const Point2& goal,
                        std::vector<double> break_hints) {
  if (samples.empty()) throw InvalidProblem("reference path needs samples");
  Rhrp p;
  p.samples_ = std::move(samples);
  p.length_ = p.samples_.back().s;
  p.rho_ = rho;
  p.goal_ = goal;
  p.break_hints_ = std::move(break_hints);
  return p;
}

Point2 Rhrp::sample_at(double s) const {
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), s,
                                   [](const RhrpSample& a, double v) { return a.s < v; });
  if (it == samples_.end()) return samples_.back().r;
  if (it == samples_.begin()) return it->r;
  const auto prev = it - 1;
  const double span = it->s - prev->s;
  if (span <= 1e-12) return it->r;
  const double t = (s - prev->s) / span;
  return prev->r + (it->r - prev->r) * t;
}

Point2 Rhrp::eval(double s) const {
  if (segments_.empty()) throw Error("reference path is not fitted");
  const double tol = 1e-6 * std::max(1.0, length_);
  if (s < -tol || s > length_ + tol) throw OutOfRange("path parameter outside [0, L]");
  s = std::clamp(s, 0.0, length_);
  // Locate the segment containing s.
  std::size_t lo = 0, hi = segments_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (segments_[mid].s1 < s) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const PolySegment& seg = segments_[lo];
  const double span = std::max(seg.s1 - seg.s0, 1e-12);
  const double u = std::clamp((s - seg.s0) / span, 0.0, 1.0);
  return {horner(seg.cx, u), horner(seg.cy, u)};
}

void fit_polynomial(Rhrp& path) {
  if (path.samples_.size() <= 1) {
    if (path.segments_.empty()) path = Rhrp::singleton(path.goal_, path.rho_);
    return;
  }
  const double bound = 0.01 * std::max(path.rho_, 1e-9);

  // Initial pieces: break hints first (a known corner in a nominal path),
  // then residual-driven bisection.
  std::vector<std::size_t> cuts{0, path.samples_.size() - 1};
  for (double hint : path.break_hints_) {
    if (hint <= 1e-9 || hint >= path.length_ - 1e-9) continue;
    const auto it =
        std::lower_bound(path.samples_.begin(), path.samples_.end(), hint,
                         [](const RhrpSample& a, double v) { return a.s < v; });
    const std::size_t idx = it - path.samples_.begin();
    if (idx > 0 && idx + 1 < path.samples_.size()) cuts.push_back(idx);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<PolySegment> segments;
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    fit_recursive(path.samples_, cuts[i], cuts[i + 1], bound, 0, &segments, &worst);
  }
  path.segments_ = std::move(segments);
  path.max_fit_residual_ = worst;
  if (worst > bound) {
    throw FitTooCoarse("polynomial fit residual above 0.01 rho after subdivision");
  }
}

Rhrp integrate_rhrp(const ModulationField& field, const Point2& r0, double L, double rho) {
  if (L <= 0.0) throw InvalidProblem("RHRP length must be positive");
  if (geom::distance(r0, field.goal()) <= geom::kGeomTol) {
    return Rhrp::singleton(field.goal(), rho);
  }

  const ModulationField work = field.with_references_off_segment(r0);
  const double ds = L / kIntegrationSteps;

  std::vector<RhrpSample> samples;
  samples.reserve(kIntegrationSteps + 2);
  samples.push_back({0.0, r0});

  Point2 r = r0;
  double s = 0.0;
  double arrival = -1.0;
  for (int step = 0; step < kIntegrationSteps; ++step) {
    const double to_goal = geom::distance(r, work.goal());
    if (to_goal <= ds) {
      s += to_goal;
      samples.push_back({s, work.goal()});
      arrival = s;
      break;
    }
    auto dir = [&](const Point2& q) {
      const Point2 v = work.eval_clamped(q);
      const double n = v.norm();
      return n < 1e-12 ? Point2{0.0, 0.0} : v / n;
    };
    const Point2 k1 = dir(r);
    if (k1.norm() < 0.5) break;  // stalled (at goal or a saddle)
    const Point2 k2 = dir(r + k1 * (0.5 * ds));
    const Point2 k3 = dir(r + k2 * (0.5 * ds));
    const Point2 k4 = dir(r + k3 * ds);
    Point2 next = r + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (ds / 6.0);

    // Invariance guard: RK4 cuts corners of the polygonized boundary by
    // O(ds^2 / R); breaches within one step length project back onto the
    // boundary, anything deeper is a genuine escape.
    for (std::size_t i = 0; i < work.obstacle_count(); ++i) {
      const double g = work.gamma(i, next);
      if (g < 1.0) {
        const Point2 proj = work.project_outside(i, next, 1e-9);
        if (geom::distance(proj, next) > ds) {
          throw IntegrationEscape("reference path penetrated a star obstacle");
        }
        next = proj;
      }
    }
    if (const auto wg = work.workspace_gamma(next); wg && *wg < 1.0) {
      const Point2 proj = work.project_into_workspace(next, 1e-9);
      if (geom::distance(proj, next) > ds) {
        throw IntegrationEscape("reference path exited the workspace");
      }
      next = proj;
    }

    s += ds;
    r = next;
    samples.push_back({s, r});
  }

  // The mapping is defined on all of [0, L]: once the flow reaches the goal
  // it stays there, so pad with a constant tail (kept as a fit breakpoint).
  std::vector<double> hints;
  if (arrival >= 0.0 && arrival < L - 1e-9) {
    hints.push_back(arrival);
    for (double tail = arrival + ds; tail < L; tail += ds) {
      samples.push_back({tail, field.goal()});
    }
    samples.push_back({L, field.goal()});
  }
  return Rhrp::from_samples(std::move(samples), rho, field.goal(), std::move(hints));
}

}  // namespace nav2d::ds
