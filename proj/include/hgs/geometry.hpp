#ifndef HGS_GEOMETRY_HPP
#define HGS_GEOMETRY_HPP

#include <Eigen/Dense>

#include "hgs/types.hpp"

namespace hgs {

// Poincare ball radius |xi| = tanh(t/2) of the point at geodesic distance t.
double ball_radius_from_geodesic(double t);

// Inverse map t = 2 artanh(rho); finite for every rho in [0, 1).
double geodesic_from_ball_radius(double rho);

// Radial volume weight sinh(t)^{N-1}. Evaluated in log form for large t so
// the weight survives well past the overflow point of sinh(t)^{N-1} powering.
double radial_volume_weight(double t, SpaceDim dim);

// Surface area of the unit (N-1)-sphere, 2 pi^{N/2} / Gamma(N/2).
double sphere_area(SpaceDim dim);

// Samples of a scalar radial profile f(t) on a strictly increasing grid of
// geodesic distances.
class RadialGrid {
 public:
  RadialGrid(Eigen::ArrayXd nodes, Eigen::ArrayXd values);

  const Eigen::ArrayXd& nodes() const { return nodes_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::Index size() const { return nodes_.size(); }

 private:
  Eigen::ArrayXd nodes_;
  Eigen::ArrayXd values_;
};

// Composite trapezoid sum of y over the (possibly non-uniform) nodes x.
double trapezoid(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

// Trapezoid with one Richardson refinement pass: the full-grid sum is
// compared against the every-other-node sum and extrapolated.
double trapezoid_refined(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

// omega_{N-1} * integral of k(t) f(t) dt over the grid span, where f is the
// sampled profile and k the radial volume weight.
double radial_integral(const RadialGrid& grid, SpaceDim dim);

}  // namespace hgs

#endif
