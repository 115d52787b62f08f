// Acceptance checks for the minimum-residual solver.  Each numbered check
// prints exactly one PASS/FAIL line; the exit status is the number of failed
// checks.  The checks cover the two benchmark problems end to end:
//
//   1  smooth benchmark, uniform refinement: asymptotic convergence rates
//   2  smooth benchmark: Newton iteration counts on every mesh
//   3  singular benchmark, uniform refinement: reduced rates
//   4  singular benchmark, adaptive refinement: restored rates + localization
//   5  residual/indicator identity at every converged solve
//   6  Jacobian vs finite differences of the gradient
//   7  exact reproduction of affine solutions of linear problems
//   8  per-element dual residual vs dense Gram-solve oracle
//   9  residual/error effectivity stays in a bounded band
//  10  manufactured loads satisfy the strong PDE at random points

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "dpgls/runner.hpp"
#include "oracle.hpp"

using namespace dpgls;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%2d] %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt_slope(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

double slope_of(const RateReport& rates, const std::string& name) {
  for (const auto& e : rates.entries)
    if (e.quantity == name) return e.slope;
  return std::numeric_limits<double>::quiet_NaN();
}

bool in_band(double value, double lo, double hi) {
  return std::isfinite(value) && value >= lo && value <= hi;
}

// Trailing window for the rate fit: smallest window of at least four records
// whose element counts span a factor of eight (uniform records grow by x4 per
// step, so this yields the default four; adaptive histories may need more).
int rate_window(const std::vector<ConvergenceRecord>& records) {
  const int n = static_cast<int>(records.size());
  for (int k = 4; k <= n; ++k) {
    const double span = double(records[n - 1].n_elements) /
                        double(records[n - k].n_elements);
    if (span >= 8.0) return k;
  }
  return n;
}

double min_vertex_distance(const Mesh& mesh, int t, const Vec2& point) {
  double d = std::numeric_limits<double>::max();
  for (int i = 0; i < 3; ++i)
    d = std::min(d, (mesh.vertex(mesh.triangle(t)[i]) - point).norm());
  return d;
}

// ---------------------------------------------------------------- checks 1-4

AdaptResult run_history(const ProblemSpec& problem, const Mesh& initial,
                        RefineMode mode, int max_elements, double theta = 0.5) {
  AdaptOptions options;
  options.mode = mode;
  options.theta = theta;
  options.max_elements = max_elements;
  return adapt_loop(problem, initial, options);
}

void check_rates(int id, const char* label,
                 const std::vector<ConvergenceRecord>& records,
                 double res_lo, double res_hi, double l2_lo, double l2_hi,
                 const std::string& extra = "", bool extra_ok = true) {
  const RateReport rates = estimate_rates(records, rate_window(records));
  const double s_res = slope_of(rates, "Res");
  const double s_err = slope_of(rates, "err_U");
  const double s_l2 = slope_of(rates, "err_u_L2");
  const bool pass = in_band(s_res, res_lo, res_hi) &&
                    in_band(s_err, res_lo, res_hi) &&
                    in_band(s_l2, l2_lo, l2_hi) && extra_ok;
  std::ostringstream detail;
  detail << label << ": slopes over last " << rates.window << " of "
         << records.size() << " meshes (N=" << records.back().n_elements
         << "): Res " << fmt_slope(s_res) << ", err_U " << fmt_slope(s_err)
         << " (want [" << res_lo << "," << res_hi << "]), err_u_L2 "
         << fmt_slope(s_l2) << " (want [" << l2_lo << "," << l2_hi << "])"
         << extra;
  report(id, pass, detail.str());
}

// ------------------------------------------------------------------ check 6

ProblemSpec problem_of(int which) { return which == 0 ? example1() : example2(); }

Mesh refined_thrice(int which) {
  Mesh mesh = which == 0 ? build_unit_square(2) : build_lshape(1);
  for (int s = 0; s < 3; ++s) {
    MarkSet all(mesh.num_triangles());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    mesh = bisect(mesh, all);
  }
  return mesh;
}

double jacobian_fd_error(const ProblemSpec& problem, const Mesh& mesh,
                         unsigned seed) {
  const TrialDofMap map = build_trial_dofmap(mesh, all_boundary_dirichlet());
  const LinearNormalSystem sys = assemble_linear(mesh, map, problem);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> val(-0.9, 0.9);
  DiscreteSolution x = DiscreteSolution::zeros(mesh);
  for (int i = 0; i < x.u.size(); ++i) x.u[i] = val(rng);
  for (int i = 0; i < x.sigma.size(); ++i) x.sigma[i] = val(rng);
  for (int i = 0; i < x.q.size(); ++i) x.q[i] = val(rng);
  for (int i = 0; i < x.r.size(); ++i) x.r[i] = val(rng);
  for (int v : map.dirichlet_vertices)
    x.u[v] = problem.dirichlet(mesh.vertex(v));

  const Eigen::MatrixXd dense = el_jacobian(mesh, map, sys, x, problem).dense();
  const double h = 1e-6;
  const Eigen::VectorXd base = x.free_vector(map);
  double worst = 0.0;
  for (int k = 0; k < map.total(); ++k) {
    Eigen::VectorXd pert = base;
    pert[k] += h;
    x.set_free_vector(map, pert);
    const Eigen::VectorXd fp = el_residual(mesh, map, sys, x, problem);
    pert[k] -= 2 * h;
    x.set_free_vector(map, pert);
    const Eigen::VectorXd fm = el_residual(mesh, map, sys, x, problem);
    worst = std::max(worst,
                     (dense.col(k) - (fp - fm) / (2 * h)).cwiseAbs().maxCoeff());
    x.set_free_vector(map, base);
  }
  return worst / dense.cwiseAbs().maxCoeff();
}

// ------------------------------------------------------------------ check 8

std::array<Vec2, 3> random_triangle(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  while (true) {
    const Vec2 a(coord(rng), coord(rng)), b(coord(rng), coord(rng)),
        c(coord(rng), coord(rng));
    const double doubled = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (doubled > 0.2) return {a, b, c};
  }
}

double bary_hat(const std::array<Vec2, 3>& v, int i, const Vec2& p) {
  const auto lam = oracle::barycentric(v, p);
  return i < 3 ? lam[i] : 27.0 * lam[0] * lam[1] * lam[2];
}

Vec2 bary_hat_grad(const std::array<Vec2, 3>& v, int i, const Vec2& p) {
  Eigen::Matrix3d m;
  m << v[0].x(), v[1].x(), v[2].x(), v[0].y(), v[1].y(), v[2].y(), 1, 1, 1;
  const Eigen::Matrix3d inv = m.inverse();
  const std::array<Vec2, 3> g{Vec2(inv(0, 0), inv(0, 1)),
                              Vec2(inv(1, 0), inv(1, 1)),
                              Vec2(inv(2, 0), inv(2, 1))};
  if (i < 3) return g[i];
  const auto lam = oracle::barycentric(v, p);
  return 27.0 * (lam[1] * lam[2] * g[0] + lam[0] * lam[2] * g[1] +
                 lam[0] * lam[1] * g[2]);
}

// ----------------------------------------------------------------- check 10

double laplacian_fd(const ScalarField& u, const Vec2& p, double h) {
  auto second = [&](const Vec2& e) {
    return (-u(p + 2 * h * e) + 16.0 * u(p + h * e) - 30.0 * u(p) +
            16.0 * u(p - h * e) - u(p - 2 * h * e)) /
           (12.0 * h * h);
  };
  return second(Vec2(1, 0)) + second(Vec2(0, 1));
}

double convection_fd(const ProblemSpec& p, const Vec2& x, double h) {
  const ScalarField w = [&](const Vec2& y) { return p.rho(p.exact->u(y)); };
  const Vec2 e = p.beta.normalized();
  return p.beta.norm() *
         (-w(x + 2 * h * e) + 8.0 * w(x + h * e) - 8.0 * w(x - h * e) +
          w(x - 2 * h * e)) /
         (12.0 * h);
}

double normalized_defect(const ProblemSpec& p, const Vec2& x, double h) {
  const double defect = -laplacian_fd(p.exact->u, x, h) - convection_fd(p, x, h) +
                        p.gamma(p.exact->u(x)) - p.f(x);
  return std::abs(defect) / (1.0 + std::abs(p.f(x)));
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;

  // Checks 1 and 2: smooth benchmark under uniform refinement.
  const auto tic1 = clock::now();
  const AdaptResult ex1_uniform =
      run_history(example1(), build_unit_square(2), RefineMode::uniform, 30000);
  const double runtime1 =
      std::chrono::duration<double>(clock::now() - tic1).count();
  {
    std::ostringstream extra;
    extra << "; runtime " << fmt_slope(runtime1) << "s (want < 300)";
    check_rates(1, "smooth benchmark, uniform", ex1_uniform.records,
                -0.65, -0.40, -1.15, -0.85, extra.str(),
                !ex1_uniform.newton_failed && runtime1 < 300.0);
  }
  {
    int worst = 0;
    bool all_converged = !ex1_uniform.records.empty();
    for (const auto& rec : ex1_uniform.records) {
      worst = std::max(worst, rec.newton_iterations);
      all_converged = all_converged && rec.newton_converged;
    }
    std::ostringstream detail;
    detail << "Newton on every smooth-benchmark mesh: converged with <= 5 "
              "steps to stationarity 1e-6 (max seen " << worst << ")";
    report(2, all_converged && worst <= 5, detail.str());
  }

  // Check 3: singular benchmark under uniform refinement (reduced orders).
  const AdaptResult ex2_uniform =
      run_history(example2(), build_lshape(4), RefineMode::uniform, 20000);
  check_rates(3, "singular benchmark, uniform", ex2_uniform.records,
              -0.45, -0.25, -0.80, -0.55, "", !ex2_uniform.newton_failed);

  // Check 4: adaptive refinement restores the optimal orders and marks
  // near the reentrant corner.
  const AdaptResult ex2_adaptive = run_history(
      example2(), build_lshape(4), RefineMode::adaptive, 20000, 0.5);
  {
    // Localization is a property of the grading-establishment phase: the
    // first refinements mark near the corner far beyond the element share
    // there, after which the bulk criterion equidistributes the indicators
    // and marks track the element distribution.  Aggregate over the first
    // three refinements (the regime the singular benchmark illustrates).
    Mesh mesh = build_lshape(4);
    long marked_near = 0, marked_total = 0, near = 0, total = 0;
    std::size_t round = 0;
    for (const MarkSet& marks : ex2_adaptive.marks) {
      if (round++ >= 3) break;
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        ++total;
        if (min_vertex_distance(mesh, t, Vec2(0, 0)) <= 0.25) ++near;
      }
      for (int t : marks) {
        ++marked_total;
        if (min_vertex_distance(mesh, t, Vec2(0, 0)) <= 0.25) ++marked_near;
      }
      mesh = bisect(mesh, marks);
    }
    const double marked_fraction =
        marked_total > 0 ? double(marked_near) / double(marked_total) : 0.0;
    const double share = total > 0 ? double(near) / double(total) : 1.0;
    std::ostringstream extra;
    extra << "; marked fraction near corner " << fmt_slope(marked_fraction)
          << " vs element share " << fmt_slope(share);
    check_rates(4, "singular benchmark, adaptive (theta 1/2)",
                ex2_adaptive.records, -0.65, -0.40, -1.15, -0.80, extra.str(),
                !ex2_adaptive.newton_failed && marked_fraction > share);
  }

  // Check 5: the combined residual equals the element indicators at every
  // converged solve of both a uniform and an adaptive mini-run.
  {
    double worst = 0.0;
    int solves = 0;
    bool ok = true;
    for (int variant = 0; variant < 2 && ok; ++variant) {
      const ProblemSpec problem = variant == 0 ? example1() : example2();
      Mesh mesh = variant == 0 ? build_unit_square(2) : build_lshape(1);
      const int steps = variant == 0 ? 5 : 12;
      for (int s = 0; s < steps && ok; ++s) {
        const TrialDofMap map = build_trial_dofmap(mesh, all_boundary_dirichlet());
        const LinearNormalSystem sys = assemble_linear(mesh, map, problem);
        DiscreteSolution x = initial_guess(mesh, map, problem);
        const NewtonReport newton = newton_solve(mesh, map, sys, x, problem);
        ok = newton.converged;
        const Indicators ind = compute_indicators(mesh, sys, x, problem);
        const double lhs = ind.total * ind.total;
        const double rhs = ind.element.squaredNorm();
        worst = std::max(worst, std::abs(lhs - rhs) / lhs);
        ++solves;
        if (variant == 0) {
          MarkSet all(mesh.num_triangles());
          for (std::size_t i = 0; i < all.size(); ++i) all[i] = int(i);
          mesh = bisect(mesh, all);
        } else {
          mesh = bisect(mesh, doerfler_mark(ind, 0.5));
        }
      }
    }
    std::ostringstream detail;
    detail << "Res^2 == sum of element indicators^2 at " << solves
           << " converged solves (worst relative gap "
           << (worst == 0.0 ? std::string("0") : fmt_slope(std::log10(worst)))
           << " log10, want <= -12)";
    report(5, ok && worst <= 1e-12, detail.str());
  }

  // Check 6: Jacobian against central finite differences, 20 random states
  // per benchmark on three-times-refined meshes.
  {
    double worst = 0.0;
    for (int which = 0; which < 2; ++which) {
      const ProblemSpec problem = problem_of(which);
      const Mesh mesh = refined_thrice(which);
      for (int s = 0; s < 20; ++s)
        worst = std::max(worst,
                         jacobian_fd_error(problem, mesh, 1000 * which + s));
    }
    std::ostringstream detail;
    detail << "el_jacobian vs central differences, 2 x 20 random states: "
              "worst relative error "
           << fmt_slope(std::log10(worst)) << " log10 (want <= -5)";
    report(6, worst <= 1e-5, detail.str());
  }

  // Check 7: linear problems with affine solutions are reproduced exactly
  // after a single Newton step.
  {
    bool pass = true;
    double worst_dual = 0.0, worst_vertex = 0.0;
    int worst_steps = 0;
    for (int variant = 0; variant < 2; ++variant) {
      ProblemSpec p;
      if (variant == 1)
        p.kappa = [](const Vec2&) {
          return (Eigen::Matrix2d() << 2.0, 0.3, 0.3, 1.0).finished();
        };
      p.beta = Vec2(1.0, 2.0);
      p.rho = [](double) { return 0.0; };
      p.drho = [](double) { return 0.0; };
      p.ddrho = [](double) { return 0.0; };
      p.gamma = [](double) { return 0.0; };
      p.dgamma = [](double) { return 0.0; };
      p.ddgamma = [](double) { return 0.0; };
      p.f = [](const Vec2&) { return 0.0; };
      auto affine = [](const Vec2& x) { return 0.7 - 1.3 * x.x() + 2.1 * x.y(); };
      p.dirichlet = affine;

      const Mesh mesh = build_unit_square(3);
      const TrialDofMap map = build_trial_dofmap(mesh, all_boundary_dirichlet());
      const LinearNormalSystem sys = assemble_linear(mesh, map, p);
      DiscreteSolution x = initial_guess(mesh, map, p);
      const NewtonReport report_ = newton_solve(mesh, map, sys, x, p);

      worst_steps = std::max(worst_steps, report_.iterations);
      worst_dual = std::max(worst_dual, dual_residual(mesh, sys, x).total);
      for (int v = 0; v < mesh.num_vertices(); ++v)
        worst_vertex =
            std::max(worst_vertex, std::abs(x.u[v] - affine(mesh.vertex(v))));
      pass = pass && report_.converged && report_.iterations == 1;
    }
    std::ostringstream detail;
    detail << "affine solution, identity and anisotropic diffusion: "
           << worst_steps << " Newton step(s), dual residual "
           << fmt_slope(std::log10(std::max(worst_dual, 1e-300)))
           << " log10, vertex error "
           << fmt_slope(std::log10(std::max(worst_vertex, 1e-300)))
           << " log10 (want <= -10)";
    report(7, pass && worst_dual <= 1e-10 && worst_vertex <= 1e-10,
           detail.str());
  }

  // Check 8: per-element dual residual against an independent dense
  // Gram-solve on 50 random elements, states and quadratic loads.  Quadratic
  // loads keep the bubble load row at degree 5, so the element load vector is
  // integrated exactly and the two residuals can be compared to roundoff.
  {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::array<Vec2, 3> v = random_triangle(rng);
      const Mesh mesh({v[0], v[1], v[2]}, {std::array<int, 3>{0, 1, 2}});
      std::array<double, 6> c;
      for (double& ci : c) ci = val(rng);
      ProblemSpec p;
      p.beta = Vec2(1.0, 2.0);
      p.rho = [](double) { return 0.0; };
      p.drho = [](double) { return 0.0; };
      p.ddrho = [](double) { return 0.0; };
      p.gamma = [](double) { return 0.0; };
      p.dgamma = [](double) { return 0.0; };
      p.ddgamma = [](double) { return 0.0; };
      p.f = [c](const Vec2& x) {
        const double X = x.x(), Y = x.y();
        return c[0] + c[1] * X + c[2] * Y + c[3] * X * X + c[4] * X * Y +
               c[5] * Y * Y;
      };
      p.dirichlet = [](const Vec2&) { return 0.0; };

      const TrialDofMap map =
          build_trial_dofmap(mesh, [](int, const Vec2&) { return false; });
      const LinearNormalSystem sys = assemble_linear(mesh, map, p);
      DiscreteSolution x = DiscreteSolution::zeros(mesh);
      for (int i = 0; i < 3; ++i) {
        x.u[i] = val(rng);
        x.sigma[i] = val(rng);
      }
      x.q[0] = val(rng);
      x.r[0] = val(rng);
      const double lib = dual_residual(mesh, sys, x).element[0];

      // Dense oracle: quadrature-free of the library's tables.
      const auto& tri = mesh.triangle(0);
      const std::array<Vec2, 3> w{mesh.vertex(tri[0]), mesh.vertex(tri[1]),
                                  mesh.vertex(tri[2])};
      Eigen::Matrix4d gram;
      Eigen::Matrix<double, 4, 8> b;
      Eigen::Vector4d load;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
          gram(i, j) = oracle::integrate_triangle(w, [&](const Vec2& pt) {
            return bary_hat(w, i, pt) * bary_hat(w, j, pt) +
                   bary_hat_grad(w, i, pt).dot(bary_hat_grad(w, j, pt));
          });
        for (int j = 0; j < 3; ++j)
          b(i, j) = oracle::integrate_triangle(w, [&](const Vec2& pt) {
            return bary_hat_grad(w, j, pt).dot(bary_hat_grad(w, i, pt));
          });
        b(i, 6) = oracle::integrate_triangle(w, [&](const Vec2& pt) {
          return p.beta.dot(bary_hat_grad(w, i, pt));
        });
        b(i, 7) = oracle::integrate_triangle(
            w, [&](const Vec2& pt) { return bary_hat(w, i, pt); });
        for (int e = 0; e < 3; ++e) {
          const Vec2 a = w[(e + 1) % 3], bb = w[(e + 2) % 3];
          const oracle::Rule1d rule = oracle::gauss_legendre(12);
          double integral = 0.0;
          for (std::size_t k = 0; k < rule.x.size(); ++k)
            integral += rule.w[k] * bary_hat(w, i, a + rule.x[k] * (bb - a));
          b(i, 3 + e) = -mesh.facet_sign(0, e) * (bb - a).norm() * integral;
        }
        load(i) = oracle::integrate_triangle(
            w, [&](const Vec2& pt) { return p.f(pt) * bary_hat(w, i, pt); });
      }
      Eigen::Matrix<double, 8, 1> coeff;
      for (int i = 0; i < 3; ++i) {
        coeff[i] = x.u[tri[i]];
        coeff[3 + i] = x.sigma[mesh.facet(0, i)];
      }
      coeff[6] = x.q[0];
      coeff[7] = x.r[0];
      const Eigen::Vector4d res = b * coeff - load;
      const double dense = std::sqrt(res.dot(gram.fullPivLu().solve(res)));
      worst = std::max(worst, std::abs(lib - dense) / dense);
    }
    std::ostringstream detail;
    detail << "element dual residual vs dense Gram-solve, 50 random "
              "elements/states/quadratic loads: worst relative gap "
           << fmt_slope(std::log10(worst)) << " log10 (want <= -12)";
    report(8, worst <= 1e-12, detail.str());
  }

  // Check 9: the ratio Res / err_U stays inside a factor-10 band over each
  // recorded history.
  {
    bool pass = true;
    double worst_band = 0.0;
    const std::vector<const AdaptResult*> runs = {&ex1_uniform, &ex2_uniform,
                                                  &ex2_adaptive};
    for (const AdaptResult* run : runs) {
      double lo = std::numeric_limits<double>::max(), hi = 0.0;
      for (const auto& rec : run->records) {
        if (!rec.errors || !(rec.errors->total_u > 0.0)) continue;
        const double ratio = rec.res_total / rec.errors->total_u;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      pass = pass && hi > 0.0 && hi / lo <= 10.0;
      worst_band = std::max(worst_band, hi / lo);
    }
    std::ostringstream detail;
    detail << "Res / err_U effectivity band over all three histories: worst "
              "max/min ratio "
           << fmt_slope(worst_band) << " (want <= 10)";
    report(9, pass, detail.str());
  }

  // Check 10: manufactured loads satisfy the strong equation at 1000 random
  // interior points per benchmark (singular benchmark: outside a 1e-3 ball
  // at the corner, stencil kept inside the domain).
  {
    double worst = 0.0;
    {
      const ProblemSpec p = example1();
      std::mt19937 rng(501);
      const double h = 1e-4;
      std::uniform_real_distribution<double> c(3.0 * h, 1.0 - 3.0 * h);
      for (int k = 0; k < 1000; ++k)
        worst = std::max(worst, normalized_defect(p, Vec2(c(rng), c(rng)), h));
    }
    {
      const ProblemSpec p = example2();
      std::mt19937 rng(502);
      std::uniform_real_distribution<double> c(-1.0, 1.0);
      int kept = 0;
      while (kept < 1000) {
        const Vec2 x(c(rng), c(rng));
        const double r = x.norm();
        if (r <= 1e-3) continue;  // excluded neighborhood of the corner
        const double h = std::min(1e-4, 2e-3 * r);
        if (1.0 - std::abs(x.x()) <= 3.0 * h) continue;  // outer boundary
        if (1.0 - std::abs(x.y()) <= 3.0 * h) continue;
        if (x.x() > -3.0 * h && x.y() < 3.0 * h) continue;  // removed quadrant
        worst = std::max(worst, normalized_defect(p, x, h));
        ++kept;
      }
    }
    std::ostringstream detail;
    detail << "strong-form defect of the manufactured loads at 2 x 1000 "
              "points: worst "
           << fmt_slope(std::log10(worst)) << " log10 (want <= -5)";
    report(10, worst <= 1e-5, detail.str());
  }

  std::printf("acceptance: %d/10 passed\n", 10 - failures);
  return failures;
}
