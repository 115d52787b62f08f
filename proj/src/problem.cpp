#include "dpgls/problem.hpp"

#include <cmath>

namespace dpgls {

namespace {

constexpr double kPi = 3.14159265358979323846;

double square_exact_u(const Vec2& p) {
  return std::sin(2.0 * kPi * p.x()) * std::sin(kPi * p.y());
}

Vec2 square_exact_grad(const Vec2& p) {
  return {2.0 * kPi * std::cos(2.0 * kPi * p.x()) * std::sin(kPi * p.y()),
          kPi * std::sin(2.0 * kPi * p.x()) * std::cos(kPi * p.y())};
}

}  // namespace

ProblemSpec example1() {
  ProblemSpec p;
  p.beta = Vec2(1.0, 2.0);
  p.rho = [](double u) { return std::cos(u); };
  p.drho = [](double u) { return -std::sin(u); };
  p.ddrho = [](double u) { return -std::cos(u); };
  p.gamma = [](double u) { return std::atan(u); };
  p.dgamma = [](double u) { return 1.0 / (1.0 + u * u); };
  p.ddgamma = [](double u) {
    const double d = 1.0 + u * u;
    return -2.0 * u / (d * d);
  };
  // For the u below: -lap u = 5 pi^2 u and
  // -div(rho(u) beta) = -rho'(u) beta . grad u = sin(u) (beta . grad u).
  p.f = [beta = p.beta](const Vec2& x) {
    const double u = square_exact_u(x);
    const Vec2 g = square_exact_grad(x);
    return 5.0 * kPi * kPi * u + std::sin(u) * beta.dot(g) + std::atan(u);
  };
  p.dirichlet = [](const Vec2&) { return 0.0; };
  p.exact = ExactSolution{square_exact_u, square_exact_grad};
  return p;
}

double lshape_exact_u(const Vec2& x) {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.0) theta += 2.0 * kPi;  // range [0, 3 pi/2] on the L-shape
  const double phi = theta - 0.75 * kPi;  // measured from the corner bisector
  return std::cbrt(r * r) * std::cos(2.0 / 3.0 * phi);
}

Vec2 lshape_exact_grad(const Vec2& x) {
  const double r = x.norm();
  if (r == 0.0) return Vec2::Zero();  // the gradient blows up at the corner
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.0) theta += 2.0 * kPi;
  const double phi = theta - 0.75 * kPi;
  const double a = 2.0 / 3.0;
  const double s = a * std::pow(r, a - 1.0);
  const double c = std::cos(a * phi), sn = std::sin(a * phi);
  // d/dr and (1/r) d/dtheta parts in polar coordinates.
  const double ct = std::cos(theta), st = std::sin(theta);
  return {s * (c * ct + sn * st), s * (c * st - sn * ct)};
}

ProblemSpec example2() {
  ProblemSpec p;
  p.beta = Vec2(1.0, 2.0);
  p.rho = [](double u) { return u * u; };
  p.drho = [](double u) { return 2.0 * u; };
  p.ddrho = [](double) { return 2.0; };
  p.gamma = [](double u) { return u * u * u; };
  p.dgamma = [](double u) { return 3.0 * u * u; };
  p.ddgamma = [](double u) { return 6.0 * u; };
  // u is harmonic, so f = -2 u (beta . grad u) + u^3.
  p.f = [beta = p.beta](const Vec2& x) {
    const double u = lshape_exact_u(x);
    return -2.0 * u * beta.dot(lshape_exact_grad(x)) + u * u * u;
  };
  p.dirichlet = lshape_exact_u;
  p.exact = ExactSolution{lshape_exact_u, lshape_exact_grad};
  return p;
}

}  // namespace dpgls
