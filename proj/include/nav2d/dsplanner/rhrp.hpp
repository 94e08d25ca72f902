#pragma once

#include <array>
#include <vector>

#include "nav2d/dsplanner/modulation.hpp"
#include "nav2d/geometry/types.hpp"

namespace nav2d::ds {

struct RhrpSample {
  double s = 0.0;
  geom::Point2 r;
};

/// Degree-6 piecewise polynomial segment on s in [s0, s1], evaluated in the
/// normalized coordinate u = (s - s0) / (s1 - s0).
struct PolySegment {
  double s0 = 0.0;
  double s1 = 0.0;
  std::array<double, 7> cx{};
  std::array<double, 7> cy{};
};

/// Arc-length-parametrized receding-horizon reference path with clearance
/// rho and a fitted polynomial approximation for the MPC.
class Rhrp {
 public:
  Rhrp() = default;

  static Rhrp singleton(const geom::Point2& goal, double rho);
  static Rhrp from_samples(std::vector<RhrpSample> samples, double rho,
                           const geom::Point2& goal, std::vector<double> break_hints = {});

  double length() const { return length_; }
  double rho() const { return rho_; }
  const geom::Point2& goal() const { return goal_; }
  bool is_singleton() const { return length_ <= 1e-12; }
  const std::vector<RhrpSample>& samples() const { return samples_; }
  const std::vector<PolySegment>& segments() const { return segments_; }
  bool fitted() const { return !segments_.empty(); }
  double max_fit_residual() const { return max_fit_residual_; }
  const std::vector<double>& break_hints() const { return break_hints_; }

  /// Polynomial evaluation; clamps within a small tolerance of [0, L] and
  /// throws OutOfRange beyond it.
  geom::Point2 eval(double s) const;

  /// Nearest sample point (for diagnostics and tunnel checks).
  geom::Point2 sample_at(double s) const;

  friend void fit_polynomial(Rhrp& path);

 private:
  std::vector<RhrpSample> samples_;
  std::vector<PolySegment> segments_;
  std::vector<double> break_hints_;
  double length_ = 0.0;
  double rho_ = 0.0;
  double max_fit_residual_ = 0.0;
  geom::Point2 goal_;
};

/// Least-squares degree-6 fit per coordinate over s in [0, L]; subdivides at
/// break hints / midpoints until the residual is at most 0.01 * rho. Throws
/// FitTooCoarse when subdivision bottoms out.
void fit_polynomial(Rhrp& path);

/// Integrates the normalized modulated dynamics dr/ds = eta_bar(r) from r0
/// over at most length L (RK4, fixed step L/200). The path stays in the star
/// world; boundary breaches beyond tolerance raise IntegrationEscape. The
/// result is not yet polynomial-fitted.
Rhrp integrate_rhrp(const ModulationField& field, const geom::Point2& r0, double L, double rho);

/// eval via the fitted polynomial (spec-level alias of Rhrp::eval).
inline geom::Point2 eval_reference(const Rhrp& path, double s) { return path.eval(s); }

}  // namespace nav2d::ds
