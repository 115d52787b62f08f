#pragma once

// Problem data for the semilinear model problem
//   -div(kappa grad u + rho(u) beta) + gamma(u) = f   in Omega,
//   u = g on the Dirichlet boundary,
// together with the two benchmark configurations used by the driver.

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "dpgls/mesh.hpp"

namespace dpgls {

using ScalarField = std::function<double(const Vec2&)>;
using ScalarFunction = std::function<double(double)>;

struct ExactSolution {
  ScalarField u;
  std::function<Vec2(const Vec2&)> grad_u;
};

struct ProblemSpec {
  /// Diffusion matrix; empty means the identity.  Samples must be symmetric
  /// positive definite.
  std::function<Eigen::Matrix2d(const Vec2&)> kappa;
  Vec2 beta = Vec2::Zero();
  ScalarFunction rho, drho, ddrho;        // rho and its first two derivatives
  ScalarFunction gamma, dgamma, ddgamma;  // same for gamma
  ScalarField f;
  ScalarField dirichlet;                  // boundary datum g
  std::optional<ExactSolution> exact;

  Eigen::Matrix2d kappa_at(const Vec2& x) const {
    return kappa ? kappa(x) : Eigen::Matrix2d::Identity();
  }
};

/// Smooth benchmark on the unit square: rho = cos, gamma = arctan,
/// beta = (1,2), kappa = I, manufactured from u = sin(2 pi x) sin(pi y)
/// with homogeneous Dirichlet data.
ProblemSpec example1();

/// Singular benchmark on the L-shaped domain (-1,1)^2 \ [0,1) x (-1,0]:
/// rho(u) = u^2, gamma(u) = u^3, beta = (1,2), kappa = I, manufactured from
/// the harmonic function u = r^(2/3) cos(2 phi / 3) where phi is the angle
/// measured from the bisector of the reentrant corner, so that u vanishes on
/// the two boundary edges meeting at the origin.  Inhomogeneous Dirichlet
/// data elsewhere.
ProblemSpec example2();

/// u and grad u of the example2 manufactured solution (exposed for tests).
double lshape_exact_u(const Vec2& x);
Vec2 lshape_exact_grad(const Vec2& x);

struct ErrorNorms {
  double grad_u = 0.0;  // ||grad(u - u_h)||
  double q = 0.0;       // ||rho(u) - q_h||
  double r = 0.0;       // ||gamma(u) - r_h||
  double u_l2 = 0.0;    // ||u - u_h||
  double total_u = 0.0; // sqrt(grad_u^2 + q^2 + r^2)
};

}  // namespace dpgls
