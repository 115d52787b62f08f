#include "dpgls/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace dpgls {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double record_quantity(const ConvergenceRecord& rec, const std::string& name) {
  if (name == "Res") return rec.res_total;
  if (!rec.errors) return -1.0;
  if (name == "err_U") return rec.errors->total_u;
  if (name == "err_u_L2") return rec.errors->u_l2;
  if (name == "err_grad_u") return rec.errors->grad_u;
  return -1.0;
}

}  // namespace

RateReport estimate_rates(const std::vector<ConvergenceRecord>& records, int k) {
  if (records.size() < 2)
    throw std::invalid_argument("estimate_rates: need at least two records");
  if (k < 2) throw std::invalid_argument("estimate_rates: window must be >= 2");
  const int n = static_cast<int>(records.size());
  const int first = std::max(0, n - k);

  RateReport report;
  report.window = n - first;
  for (const std::string name : {"Res", "err_U", "err_u_L2", "err_grad_u"}) {
    // Least-squares fit of log y = s log N + c over the window.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    bool usable = true;
    for (int i = first; i < n; ++i) {
      const double y = record_quantity(records[i], name);
      if (!(y > 0.0)) {
        usable = false;
        break;
      }
      const double lx = std::log(static_cast<double>(records[i].n_elements));
      const double ly = std::log(y);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
    if (!usable || m < 2) continue;
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) continue;  // all records share one mesh size
    report.entries.push_back({name, (m * sxy - sx * sy) / denom});
  }
  return report;
}

void write_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
  out << "step,N,dofs,newton_iters,res_dual,res_rho,res_gamma,Res,"
         "err_grad_u,err_q,err_r,err_u_L2,err_U\n";
  for (const auto& rec : records) {
    out << rec.step << "," << rec.n_elements << "," << rec.n_dofs << ","
        << rec.newton_iterations << "," << fmt(rec.res_dual) << ","
        << fmt(rec.res_rho) << "," << fmt(rec.res_gamma) << ","
        << fmt(rec.res_total) << ",";
    if (rec.errors)
      out << fmt(rec.errors->grad_u) << "," << fmt(rec.errors->q) << ","
          << fmt(rec.errors->r) << "," << fmt(rec.errors->u_l2) << ","
          << fmt(rec.errors->total_u);
    else
      out << ",,,,";
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed");
}

void export_fields(const Mesh& mesh, const DiscreteSolution& solution,
                   const std::string& prefix) {
  {
    std::ofstream out(prefix + ".mesh");
    if (!out) throw std::runtime_error("export_fields: cannot open " + prefix + ".mesh");
    write_mesh_dump(mesh, out);
  }
  std::ofstream u_out(prefix + ".u");
  for (int v = 0; v < mesh.num_vertices(); ++v) u_out << fmt(solution.u[v]) << "\n";
  std::ofstream qr_out(prefix + ".qr");
  for (int t = 0; t < mesh.num_triangles(); ++t)
    qr_out << fmt(solution.q[t]) << " " << fmt(solution.r[t]) << "\n";
  if (!u_out || !qr_out)
    throw std::runtime_error("export_fields: write failed for " + prefix);
}

int run(const RunConfig& config) {
  ProblemSpec problem;
  std::optional<Mesh> mesh;
  switch (config.problem) {
    case ProblemChoice::ex1:
      problem = example1();
      mesh = build_unit_square(config.n0 > 0 ? config.n0 : 2);
      break;
    case ProblemChoice::ex2:
      problem = example2();
      mesh = build_lshape(config.n0 > 0 ? config.n0 : 4);
      break;
    case ProblemChoice::custom:
      if (!config.custom_problem || !config.custom_mesh)
        throw std::invalid_argument("run: custom problem requires problem and mesh");
      problem = *config.custom_problem;
      mesh = *config.custom_mesh;
      break;
  }
  if (config.max_elements < 1) throw std::invalid_argument("run: max_elements < 1");
  if (config.newton_tol <= 0.0) throw std::invalid_argument("run: newton_tol <= 0");
  if (config.mode == RefineMode::adaptive && (!(config.theta > 0.0) || config.theta > 1.0))
    throw std::invalid_argument("run: theta must be in (0,1]");

  AdaptOptions options;
  options.mode = config.mode;
  options.theta = config.theta;
  options.max_elements = config.max_elements;
  options.newton.tol = config.newton_tol;
  options.newton.max_iterations = config.newton_max_iterations;
  const AdaptResult result = adapt_loop(problem, *mesh, options);

  if (config.out_csv.empty()) {
    write_csv(result.records, std::cout);
  } else {
    std::ofstream out(config.out_csv);
    if (!out) throw std::invalid_argument("run: cannot open " + config.out_csv);
    write_csv(result.records, out);
  }
  if (!config.fields_prefix.empty())
    export_fields(result.mesh, result.solution, config.fields_prefix);

  if (!config.quiet && result.records.size() >= 2) {
    const RateReport rates = estimate_rates(result.records, config.rate_window);
    std::cerr << "rates over last " << rates.window << " meshes:";
    for (const auto& e : rates.entries)
      std::cerr << "  " << e.quantity << " " << fmt(e.slope);
    std::cerr << "\n";
  }
  return result.newton_failed ? 2 : 0;
}

RunConfig parse_config_file(std::istream& in) {
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq, value;
    if (!(ls >> key)) continue;  // blank line
    if (!(ls >> eq >> value) || eq != "=")
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    try {
      if (key == "problem") {
        if (value == "ex1") config.problem = ProblemChoice::ex1;
        else if (value == "ex2") config.problem = ProblemChoice::ex2;
        else throw std::invalid_argument("problem must be ex1 or ex2");
      } else if (key == "mode") {
        if (value == "uniform") config.mode = RefineMode::uniform;
        else if (value == "adaptive") config.mode = RefineMode::adaptive;
        else throw std::invalid_argument("mode must be uniform or adaptive");
      } else if (key == "theta") {
        config.theta = std::stod(value);
      } else if (key == "n0") {
        config.n0 = std::stoi(value);
      } else if (key == "max_elements") {
        config.max_elements = std::stoi(value);
      } else if (key == "tol") {
        config.newton_tol = std::stod(value);
      } else if (key == "rate_window") {
        config.rate_window = std::stoi(value);
      } else if (key == "out") {
        config.out_csv = value;
      } else if (key == "fields") {
        config.fields_prefix = value;
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " +
                                  e.what());
    }
  }
  return config;
}

}  // namespace dpgls
