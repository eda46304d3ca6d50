#include "hgs/geometry.hpp"

#include <cmath>
#include <numbers>

namespace hgs {

double ball_radius_from_geodesic(double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw domain_error("ball_radius_from_geodesic: t must be finite and >= 0");
  const double rho = std::tanh(0.5 * t);
  // tanh rounds to 1.0 for t beyond ~38.3; keep the image inside [0, 1).
  return rho < 1.0 ? rho : std::nextafter(1.0, 0.0);
}

double geodesic_from_ball_radius(double rho) {
  if (!std::isfinite(rho) || rho < 0.0 || rho >= 1.0)
    throw domain_error("geodesic_from_ball_radius: rho must lie in [0, 1)");
  return 2.0 * std::atanh(rho);
}

double radial_volume_weight(double t, SpaceDim dim) {
  if (!std::isfinite(t) || t < 0.0)
    throw domain_error("radial_volume_weight: t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  const double m = dim.damping();
  if (t > 20.0) return std::exp(m * (t + std::log1p(-std::exp(-2.0 * t)) - std::numbers::ln2));
  return std::pow(std::sinh(t), m);
}

double sphere_area(SpaceDim dim) {
  const double half_n = 0.5 * dim.value();
  return 2.0 * std::pow(std::numbers::pi, half_n) / std::tgamma(half_n);
}

RadialGrid::RadialGrid(Eigen::ArrayXd nodes, Eigen::ArrayXd values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() != values_.size())
    throw input_error("RadialGrid: nodes and values must have equal length");
  if (nodes_.size() > 0 && !(nodes_[0] >= 0.0))
    throw input_error("RadialGrid: first node must be >= 0");
  for (Eigen::Index i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw input_error("RadialGrid: nodes must be strictly increasing");
  if (!nodes_.isFinite().all() || !values_.isFinite().all())
    throw input_error("RadialGrid: non-finite entry");
}

double trapezoid(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
    sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return sum;
}

double trapezoid_refined(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  const Eigen::Index n = x.size();
  if (n < 3) return trapezoid(x, y);
  // Coarse pass over every other node, keeping the last node even when the
  // count is even so both passes share the full span.
  double coarse = 0.0;
  Eigen::Index prev = 0;
  for (Eigen::Index i = 2; i < n; i += 2) {
    coarse += 0.5 * (x[i] - x[prev]) * (y[prev] + y[i]);
    prev = i;
  }
  if (prev != n - 1) coarse += 0.5 * (x[n - 1] - x[prev]) * (y[prev] + y[n - 1]);
  const double fine = trapezoid(x, y);
  return fine + (fine - coarse) / 3.0;
}

double radial_integral(const RadialGrid& grid, SpaceDim dim) {
  if (grid.size() < 3) throw input_error("radial_integral: grid needs at least 3 nodes");
  Eigen::ArrayXd weighted(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    weighted[i] = radial_volume_weight(grid.nodes()[i], dim) * grid.values()[i];
  if (!weighted.isFinite().all())
    throw input_error("radial_integral: non-finite weighted sample");
  return sphere_area(dim) * trapezoid_refined(grid.nodes(), weighted);
}

}  // namespace hgs
