#include "dpgls/newton.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "dpgls/quadrature.hpp"

namespace dpgls {

namespace {

double checked(double v, const char* what, int element) {
  if (!std::isfinite(v))
    throw NonFiniteError(std::string(what) + " is not finite on element " +
                         std::to_string(element));
  return v;
}

}  // namespace

Eigen::VectorXd el_residual(const Mesh& mesh, const TrialDofMap& map,
                            const LinearNormalSystem& linear,
                            const DiscreteSolution& x,
                            const ProblemSpec& problem) {
  Eigen::VectorXd f = linear.a.multiply(x.free_vector(map)) - linear.rhs;

  const QuadRule& rule = triangle_quadrature(TriangleRule::nonlinear_3pt);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const double area2 = 2.0 * mesh.area(t);
    double fq = 0.0, fr = 0.0;
    std::array<double, 3> fu{0.0, 0.0, 0.0};
    for (int k = 0; k < rule.size(); ++k) {
      const auto& b = rule.points[k];
      const double w = area2 * rule.weights[k];
      const double uh = b[0] * x.u[tri[0]] + b[1] * x.u[tri[1]] + b[2] * x.u[tri[2]];
      const double res_rho = checked(problem.rho(uh), "rho(u_h)", t) - x.q[t];
      const double res_gamma = checked(problem.gamma(uh), "gamma(u_h)", t) - x.r[t];
      const double d_rho = checked(problem.drho(uh), "rho'(u_h)", t);
      const double d_gamma = checked(problem.dgamma(uh), "gamma'(u_h)", t);
      for (int i = 0; i < 3; ++i)
        fu[i] += w * (res_rho * d_rho + res_gamma * d_gamma) * b[i];
      fq -= w * res_rho;
      fr -= w * res_gamma;
    }
    for (int i = 0; i < 3; ++i) {
      const int dof = map.vertex_dof[tri[i]];
      if (dof >= 0) f[dof] += fu[i];
    }
    f[map.q_dof(t)] += fq;
    f[map.r_dof(t)] += fr;
  }
  return f;
}

SparseSymmetric el_jacobian(const Mesh& mesh, const TrialDofMap& map,
                            const LinearNormalSystem& linear,
                            const DiscreteSolution& x,
                            const ProblemSpec& problem) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(12 * mesh.num_triangles());
  const QuadRule& rule = triangle_quadrature(TriangleRule::nonlinear_3pt);
  auto lower = [&](int a, int b, double v) {
    triplets.emplace_back(std::max(a, b), std::min(a, b), v);
  };

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const double area2 = 2.0 * mesh.area(t);
    Eigen::Matrix3d duu = Eigen::Matrix3d::Zero();
    std::array<double, 3> duq{0.0, 0.0, 0.0}, dur{0.0, 0.0, 0.0};
    for (int k = 0; k < rule.size(); ++k) {
      const auto& b = rule.points[k];
      const double w = area2 * rule.weights[k];
      const double uh = b[0] * x.u[tri[0]] + b[1] * x.u[tri[1]] + b[2] * x.u[tri[2]];
      const double res_rho = checked(problem.rho(uh), "rho(u_h)", t) - x.q[t];
      const double res_gamma = checked(problem.gamma(uh), "gamma(u_h)", t) - x.r[t];
      const double d_rho = problem.drho(uh), dd_rho = problem.ddrho(uh);
      const double d_gamma = problem.dgamma(uh), dd_gamma = problem.ddgamma(uh);
      const double c = d_rho * d_rho + res_rho * dd_rho + d_gamma * d_gamma +
                       res_gamma * dd_gamma;
      if (!std::isfinite(c))
        throw NonFiniteError("Jacobian weight is not finite on element " +
                             std::to_string(t));
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) duu(i, j) += w * c * b[i] * b[j];
        duq[i] -= w * d_rho * b[i];
        dur[i] -= w * d_gamma * b[i];
      }
    }
    for (int i = 0; i < 3; ++i) {
      const int di = map.vertex_dof[tri[i]];
      if (di < 0) continue;
      for (int j = 0; j <= i; ++j) {
        const int dj = map.vertex_dof[tri[j]];
        if (dj >= 0) lower(di, dj, duu(i, j));
      }
      lower(di, map.q_dof(t), duq[i]);
      lower(di, map.r_dof(t), dur[i]);
    }
    const double mass = mesh.area(t);  // exact for constants
    lower(map.q_dof(t), map.q_dof(t), mass);
    lower(map.r_dof(t), map.r_dof(t), mass);
  }

  const SparseSymmetric d = SparseSymmetric::from_triplets(map.total(), triplets);
  Eigen::SparseMatrix<double> sum = linear.a.lower() + d.lower();
  return SparseSymmetric::from_lower(std::move(sum));
}

DiscreteSolution initial_guess(const Mesh& mesh, const TrialDofMap& map,
                               const ProblemSpec& problem) {
  DiscreteSolution x = DiscreteSolution::zeros(mesh);
  for (int v : map.dirichlet_vertices) x.u[v] = problem.dirichlet(mesh.vertex(v));
  return x;
}

ResidualBreakdown residual_breakdown(const Mesh& mesh,
                                     const LinearNormalSystem& linear,
                                     const DiscreteSolution& x,
                                     const ProblemSpec& problem) {
  ResidualBreakdown out;
  const DualResidual dual = dual_residual(mesh, linear, x);
  out.dual = dual.total;
  out.element = Eigen::VectorXd::Zero(mesh.num_triangles());

  const QuadRule& rule = triangle_quadrature(TriangleRule::residual_7pt);
  double sum_rho = 0.0, sum_gamma = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const double area2 = 2.0 * mesh.area(t);
    double t_rho = 0.0, t_gamma = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
      const auto& b = rule.points[k];
      const double w = area2 * rule.weights[k];
      const double uh = b[0] * x.u[tri[0]] + b[1] * x.u[tri[1]] + b[2] * x.u[tri[2]];
      const double res_rho = checked(problem.rho(uh), "rho(u_h)", t) - x.q[t];
      const double res_gamma = checked(problem.gamma(uh), "gamma(u_h)", t) - x.r[t];
      t_rho += w * res_rho * res_rho;
      t_gamma += w * res_gamma * res_gamma;
    }
    sum_rho += t_rho;
    sum_gamma += t_gamma;
    out.element[t] =
        std::sqrt(dual.element[t] * dual.element[t] + t_rho + t_gamma);
  }
  out.rho = std::sqrt(sum_rho);
  out.gamma = std::sqrt(sum_gamma);
  out.total = std::sqrt(dual.total * dual.total + sum_rho + sum_gamma);
  return out;
}

namespace {

// Objective actually minimized (3-point rule in the L2 terms), used by the
// optional step-halving safeguard and the descent monitor.
double objective(const Mesh& mesh, const LinearNormalSystem& linear,
                 const DiscreteSolution& x, const ProblemSpec& problem) {
  const DualResidual dual = dual_residual(mesh, linear, x);
  double val = dual.total * dual.total;
  const QuadRule& rule = triangle_quadrature(TriangleRule::nonlinear_3pt);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const double area2 = 2.0 * mesh.area(t);
    for (int k = 0; k < rule.size(); ++k) {
      const auto& b = rule.points[k];
      const double w = area2 * rule.weights[k];
      const double uh = b[0] * x.u[tri[0]] + b[1] * x.u[tri[1]] + b[2] * x.u[tri[2]];
      const double res_rho = problem.rho(uh) - x.q[t];
      const double res_gamma = problem.gamma(uh) - x.r[t];
      val += w * (res_rho * res_rho + res_gamma * res_gamma);
    }
  }
  return val;
}

}  // namespace

NewtonReport newton_solve(const Mesh& mesh, const TrialDofMap& map,
                          const LinearNormalSystem& linear, DiscreteSolution& x,
                          const ProblemSpec& problem,
                          const NewtonOptions& options) {
  if (options.tol <= 0.0 || options.max_iterations < 1)
    throw std::invalid_argument("newton_solve: invalid options");
  NewtonReport report;
  double obj = objective(mesh, linear, x, problem);
  while (true) {
    const Eigen::VectorXd f = el_residual(mesh, map, linear, x, problem);
    report.gradient_history.push_back(f.norm());
    report.residual_history.push_back(
        residual_breakdown(mesh, linear, x, problem).total);
    if (f.norm() < options.tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iterations) break;

    const SparseSymmetric j = el_jacobian(mesh, map, linear, x, problem);
    const Eigen::VectorXd step = factor_solve(j, -f);
    Eigen::VectorXd free = x.free_vector(map);
    x.set_free_vector(map, free + step);
    double new_obj = objective(mesh, linear, x, problem);
    if (options.step_halving) {
      double damping = 1.0;
      for (int h = 0; h < options.max_halvings && new_obj > obj; ++h) {
        damping *= 0.5;
        x.set_free_vector(map, free + damping * step);
        new_obj = objective(mesh, linear, x, problem);
      }
    }
    if (new_obj > obj && report.iterations > 0) ++report.descent_violations;
    obj = new_obj;
    ++report.iterations;
  }
  report.final_residual = report.residual_history.back();
  if (report.descent_violations > 0)
    std::cerr << "newton_solve: objective increased in " << report.descent_violations
              << " step(s)\n";
  return report;
}

ErrorNorms error_norms(const Mesh& mesh, const DiscreteSolution& x,
                       const ProblemSpec& problem) {
  if (!problem.exact)
    throw std::invalid_argument("error_norms: problem has no exact solution");
  const auto& exact = *problem.exact;
  const QuadRule& rule = triangle_quadrature(TriangleRule::residual_7pt);
  double grad = 0.0, q = 0.0, r = 0.0, l2 = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const ElementGeometry g = ElementGeometry::from(mesh, t);
    const Vec2 grad_uh = x.u[tri[0]] * g.grad_lambda[0] +
                         x.u[tri[1]] * g.grad_lambda[1] +
                         x.u[tri[2]] * g.grad_lambda[2];
    for (int k = 0; k < rule.size(); ++k) {
      const auto& b = rule.points[k];
      const double w = 2.0 * g.area * rule.weights[k];
      const Vec2 p = g.point(b);
      const double u = exact.u(p);
      const double uh = b[0] * x.u[tri[0]] + b[1] * x.u[tri[1]] + b[2] * x.u[tri[2]];
      grad += w * (exact.grad_u(p) - grad_uh).squaredNorm();
      q += w * std::pow(problem.rho(u) - x.q[t], 2);
      r += w * std::pow(problem.gamma(u) - x.r[t], 2);
      l2 += w * (u - uh) * (u - uh);
    }
  }
  ErrorNorms e;
  e.grad_u = std::sqrt(grad);
  e.q = std::sqrt(q);
  e.r = std::sqrt(r);
  e.u_l2 = std::sqrt(l2);
  e.total_u = std::sqrt(grad + q + r);
  return e;
}

}  // namespace dpgls
