#include "dpgls/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dpgls {

namespace {

QuadRule make_3pt() {
  // Symmetric edge-midpoint rule, exact up to degree 2.
  QuadRule r;
  r.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  return r;
}

QuadRule make_7pt() {
  // Classical 7-point rule, exact up to degree 5.
  const double s = std::sqrt(15.0);
  const double a1 = (6.0 + s) / 21.0, w1 = (155.0 + s) / 2400.0;
  const double a2 = (6.0 - s) / 21.0, w2 = (155.0 - s) / 2400.0;
  QuadRule r;
  const double third = 1.0 / 3.0;
  r.points.push_back({third, third, third});
  r.weights.push_back(9.0 / 80.0);
  for (const double a : {a1, a2}) {
    const double b = 1.0 - 2.0 * a;
    const double w = (a == a1) ? w1 : w2;
    r.points.push_back({b, a, a});
    r.points.push_back({a, b, a});
    r.points.push_back({a, a, b});
    r.weights.insert(r.weights.end(), 3, w);
  }
  return r;
}

QuadRule make_12pt() {
  // 12-point rule, exact up to degree 6 (Dunavant).  Weights below are
  // normalized to sum to 1 and get scaled by the reference measure.
  struct Orbit {
    double a, b, w;
    bool full;  // six permutations instead of three
  };
  const Orbit orbits[] = {
      {0.873821971016996, 0.063089014491502, 0.050844906370207, false},
      {0.501426509658179, 0.249286745170910, 0.116786275726379, false},
      {0.636502499121399, 0.310352451033785, 0.082851075618374, true},
  };
  QuadRule r;
  for (const auto& o : orbits) {
    const double c = 1.0 - o.a - o.b;
    if (o.full) {
      r.points.push_back({o.a, o.b, c});
      r.points.push_back({o.a, c, o.b});
      r.points.push_back({o.b, o.a, c});
      r.points.push_back({o.b, c, o.a});
      r.points.push_back({c, o.a, o.b});
      r.points.push_back({c, o.b, o.a});
      r.weights.insert(r.weights.end(), 6, 0.5 * o.w);
    } else {
      r.points.push_back({o.a, o.b, o.b});
      r.points.push_back({o.b, o.a, o.b});
      r.points.push_back({o.b, o.b, o.a});
      r.weights.insert(r.weights.end(), 3, 0.5 * o.w);
    }
  }
  return r;
}

EdgeRule make_gauss(int n) {
  // Closed-form Gauss-Legendre nodes on [-1,1], mapped to [0,1].
  EdgeRule r;
  std::vector<double> x, w;
  if (n == 2) {
    const double t = 1.0 / std::sqrt(3.0);
    x = {-t, t};
    w = {1.0, 1.0};
  } else {
    const double c = 2.0 * std::sqrt(6.0 / 5.0);
    const double t1 = std::sqrt((3.0 - c) / 7.0), w1 = (18.0 + std::sqrt(30.0)) / 36.0;
    const double t2 = std::sqrt((3.0 + c) / 7.0), w2 = (18.0 - std::sqrt(30.0)) / 36.0;
    x = {-t2, -t1, t1, t2};
    w = {w2, w1, w1, w2};
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.points.push_back(0.5 * (1.0 + x[i]));
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

}  // namespace

const QuadRule& triangle_quadrature(TriangleRule rule) {
  static const QuadRule r3 = make_3pt();
  static const QuadRule r7 = make_7pt();
  static const QuadRule r12 = make_12pt();
  switch (rule) {
    case TriangleRule::nonlinear_3pt: return r3;
    case TriangleRule::residual_7pt: return r7;
    case TriangleRule::assembly_12pt: return r12;
  }
  throw std::invalid_argument("triangle_quadrature: unknown rule");
}

const EdgeRule& edge_gauss(int n) {
  static const EdgeRule g2 = make_gauss(2);
  static const EdgeRule g4 = make_gauss(4);
  if (n == 2) return g2;
  if (n == 4) return g4;
  throw std::invalid_argument("edge_gauss: only 2- and 4-point rules available");
}

}  // namespace dpgls
