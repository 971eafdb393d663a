#include "ucfem/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <thread>

#include <fmt/format.h>

#include "ucfem/problems.hpp"

namespace ucfem {

namespace {

// ---------------------------------------------------------------------------
// Task execution

struct CaseTask {
  std::shared_ptr<const Mesh> mesh;
  int p = 1;
  CaseSpec spec;
  std::vector<Region> regions;
};

// Runs independent cases on `threads` workers. Results are stored by task
// index, so the output does not depend on scheduling.
std::vector<CaseResult> run_cases(const std::vector<CaseTask>& tasks, int threads) {
  std::vector<CaseResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const auto& t = tasks[i];
        results[i] = run_case(t.mesh, t.p, t.spec, t.regions);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// ---------------------------------------------------------------------------
// Config helpers

struct MeshPlan {
  double spacing = 0.1;
  int min_level = 0;
  std::map<int, int> max_level;  // by degree
  int deepest = 0;
};

MeshPlan mesh_plan(const Config& c, const std::vector<int>& degrees, int fallback_max) {
  MeshPlan m;
  m.spacing = c.number("mesh.spacing", 0.1);
  m.min_level = c.integer("mesh.min_level", 0);
  const int common = c.integer("mesh.max_level", fallback_max);
  for (int p : degrees) {
    const int l = c.integer(fmt::format("mesh.max_level_p{}", p), common);
    if (l < m.min_level) throw ConfigError(fmt::format("max level for p = {} is below mesh.min_level", p));
    m.max_level[p] = l;
    m.deepest = std::max(m.deepest, l);
  }
  if (!(m.spacing > 0.0 && m.spacing <= 1.0)) throw ConfigError("mesh.spacing must lie in (0, 1]");
  return m;
}

std::vector<int> degrees_of(const Config& c) {
  auto d = c.integers("problem.degrees", {1, 2, 3});
  for (int p : d)
    if (p < 1 || p > 3) throw ConfigError("problem.degrees entries must be 1, 2 or 3");
  return d;
}

StabilizationParams params_for(const Config& c, int p) {
  StabilizationParams s = StabilizationParams::defaults(p);
  s.gamma[0] = c.number("stabilization.gamma1", s.gamma[0]);
  s.gamma_gls = c.number("stabilization.gamma_gls", s.gamma_gls);
  s.alpha = c.number("stabilization.alpha", s.alpha);
  if (p >= 2) {
    const double beta2 = c.number("stabilization.beta2", 0.0);
    s.beta[1] = beta2;
    s.gamma[1] = c.number("stabilization.gamma2", std::abs(beta2));
  }
  return s;
}

ProblemKind kind_of(const std::string& name) {
  if (name == "ill_posed") return ProblemKind::ill_posed;
  if (name == "well_posed") return ProblemKind::well_posed_dirichlet;
  throw ConfigError("problem kind must be ill_posed or well_posed, got '" + name + "'");
}

MaterialModel smooth_or_constant(const Config& c, double k, const std::string& fallback) {
  const std::string type = c.text("material.type", fallback);
  if (type == "smooth") return MaterialModel::smooth(k);
  if (type == "constant") return MaterialModel::constant(c.number("material.mu", 1.0), c.number("material.lambda", 1.25), k);
  throw ConfigError("material.type must be smooth or constant for this experiment, got '" + type + "'");
}

std::uint64_t seed_of(const Config& c) { return static_cast<std::uint64_t>(c.number("noise.seed", 1.0)); }

std::vector<std::pair<double, double>> mu_pairs(const Config& c, const std::string& key,
                                                const std::vector<std::string>& fallback) {
  std::vector<std::pair<double, double>> out;
  for (const auto& w : c.words(key, fallback)) {
    const auto colon = w.find(':');
    if (colon == std::string::npos) throw ConfigError("'" + key + "': expected pairs a:b, got '" + w + "'");
    try {
      out.emplace_back(std::stod(w.substr(0, colon)), std::stod(w.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("'" + key + "': bad pair '" + w + "'");
    }
  }
  return out;
}

std::string num_label(double v) {
  std::string s = fmt::format("{:g}", v);
  for (auto& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

// ---------------------------------------------------------------------------
// Output helpers

struct Curve {
  std::string file;
  int x = 1;
  int y = 2;
  std::string title;
};

std::string plot_block(const std::string& png, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<Curve>& curves, bool logx = true) {
  std::string s;
  s += fmt::format("set output '{}'\n", png);
  s += fmt::format("set title '{}'\nset xlabel '{}'\nset ylabel '{}'\n", title, xlabel, ylabel);
  s += logx ? "set logscale xy\n" : "unset logscale\nset logscale y\n";
  s += "plot ";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& cv = curves[i];
    s += fmt::format("{}'{}' using {}:{} skip 1 with linespoints title '{}'", i ? ", \\\n     " : "", cv.file, cv.x,
                     cv.y, cv.title);
  }
  return s + "\n\n";
}

std::string plot_header() { return "set terminal pngcairo size 900,600\nset datafile separator ','\nset grid\n\n"; }

// Column of the relative error of region index r in ConvergenceTable CSVs.
int rel_column(std::size_t r) { return 5 + 3 * static_cast<int>(r); }
int kappa_column(std::size_t regions) { return 5 + 3 * static_cast<int>(regions); }

std::string csv_name(const std::string& experiment, const std::string& label) {
  return experiment + "_" + label + ".csv";
}

// Builds a table from consecutive results and registers its CSV.
void add_table(ExperimentOutput& out, const std::string& label, const std::vector<Region>& regions,
               std::vector<CaseResult>::const_iterator first, std::size_t count) {
  ConvergenceTable t(regions);
  for (std::size_t i = 0; i < count; ++i) t.add((first + static_cast<std::ptrdiff_t>(i))->row);
  out.files.push_back({csv_name(out.experiment, label), t.to_csv()});
  out.tables.emplace(label, std::move(t));
}

std::string region_title(Region r) { return to_string(r); }

}  // namespace

// ---------------------------------------------------------------------------

ExperimentOutput run_sweep(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "sweep";
  const std::string param = c.text("sweep.parameter", "gamma1");
  if (param != "gamma1" && param != "gamma_gls" && param != "alpha")
    throw ConfigError("sweep.parameter must be gamma1, gamma_gls or alpha");
  const auto values = c.numbers("sweep.values", {});
  if (values.empty()) throw ConfigError("sweep.values is required");
  const double k = c.number("problem.k", 6.0);
  const auto degrees = degrees_of(c);
  const int level = c.integer("sweep.level", 2);
  const bool condition = c.flag("sweep.condition", true);
  const Geometry g = convex_geometry();
  const auto meshes = mesh_hierarchy(g, c.number("mesh.spacing", 0.1), level);
  const MaterialModel material = smooth_or_constant(c, k, "smooth");
  const ReferenceSolution solution = ReferenceSolution::oscillatory(k);
  const ProblemKind kind = kind_of(c.text("problem.kind", "ill_posed"));

  std::vector<CaseTask> tasks;
  for (int p : degrees)
    for (double v : values) {
      StabilizationParams s = params_for(c, p);
      if (param == "gamma1") s.gamma[0] = v;
      if (param == "gamma_gls") s.gamma_gls = v;
      if (param == "alpha") s.alpha = v;
      CaseSpec spec(material, solution, s, {kind});
      spec.estimate_condition = condition;
      tasks.push_back({meshes[static_cast<std::size_t>(level)], p, spec, {Region::B}});
    }
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  std::vector<Curve> err_curves, cond_curves;
  std::size_t i = 0;
  for (int p : degrees) {
    const std::string label = fmt::format("{}_p{}", param, p);
    std::string csv = "value,B_abs,B_rel,kappa\n";
    std::vector<double> rel, kap;
    for (double v : values) {
      const auto& r = results[i++];
      rel.push_back(r.row.errors[0].relative);
      csv += fmt::format("{},{},{},{}\n", format_number(v), format_number(r.row.errors[0].absolute),
                         format_number(r.row.errors[0].relative), r.row.kappa ? format_number(*r.row.kappa) : "");
      if (r.row.kappa) kap.push_back(*r.row.kappa);
    }
    out.series[label + ".value"] = values;
    out.series[label + ".B_rel"] = rel;
    if (condition) out.series[label + ".kappa"] = kap;
    out.files.push_back({csv_name(out.experiment, label), csv});
    err_curves.push_back({csv_name(out.experiment, label), 1, 3, fmt::format("p = {}", p)});
    cond_curves.push_back({csv_name(out.experiment, label), 1, 4, fmt::format("p = {}", p)});
  }
  script += plot_block(fmt::format("sweep_{}_error.png", param), "relative error in B", param, "error", err_curves);
  if (condition)
    script += plot_block(fmt::format("sweep_{}_condition.png", param), "condition number", param, "kappa", cond_curves);
  out.files.push_back({"sweep.gp", script});
  return out;
}

ExperimentOutput run_convergence(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "convergence";
  const double k = c.number("problem.k", 1.0);
  const auto degrees = degrees_of(c);
  const auto thetas = c.integers("noise.thetas", {});
  const double amplitude = c.number("noise.amplitude", 1.0);
  const std::uint64_t seed = seed_of(c);
  const ProblemKind kind = kind_of(c.text("problem.kind", "ill_posed"));
  const MeshPlan plan = mesh_plan(c, degrees, 3);
  const Geometry g = convex_geometry();
  const auto meshes = mesh_hierarchy(g, plan.spacing, plan.deepest);
  const MaterialModel material = smooth_or_constant(c, k, "smooth");
  const ReferenceSolution solution = ReferenceSolution::oscillatory(k);

  std::vector<std::optional<int>> variants;
  if (thetas.empty()) variants.push_back(std::nullopt);
  for (int t : thetas) {
    if (t < 0) throw ConfigError("noise.thetas must be non-negative");
    variants.emplace_back(t);
  }

  std::vector<CaseTask> tasks;
  for (const auto& theta : variants)
    for (int p : degrees)
      for (int l = plan.min_level; l <= plan.max_level.at(p); ++l) {
        CaseSpec spec(material, solution, params_for(c, p), {kind});
        if (theta)
          spec.noise = NoiseSpec{*theta, amplitude, seed + 1000003ULL * static_cast<std::uint64_t>(p) +
                                                        1009ULL * static_cast<std::uint64_t>(*theta) +
                                                        static_cast<std::uint64_t>(l)};
        tasks.push_back({meshes[static_cast<std::size_t>(l)], p, spec, g.error_regions});
      }
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  auto it = results.cbegin();
  for (const auto& theta : variants) {
    std::vector<Curve> curves;
    for (int p : degrees) {
      const std::string label = theta ? fmt::format("p{}_theta{}", p, *theta) : fmt::format("p{}", p);
      const auto n = static_cast<std::size_t>(plan.max_level.at(p) - plan.min_level + 1);
      add_table(out, label, g.error_regions, it, n);
      it += static_cast<std::ptrdiff_t>(n);
      curves.push_back({csv_name(out.experiment, label), 3, rel_column(0), fmt::format("p = {}", p)});
    }
    const std::string tag = theta ? fmt::format("theta{}", *theta) : "unperturbed";
    script += plot_block("convergence_" + tag + ".png", "relative error in B, " + tag, "dofs", "error", curves);
  }
  out.files.push_back({"convergence.gp", script});
  return out;
}

ExperimentOutput run_condition(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "condition";
  const double k = c.number("problem.k", 6.0);
  const auto degrees = degrees_of(c);
  const MeshPlan plan = mesh_plan(c, degrees, 2);
  const Geometry g = convex_geometry();
  const auto meshes = mesh_hierarchy(g, plan.spacing, plan.deepest);
  const MaterialModel material = smooth_or_constant(c, k, "smooth");
  const ReferenceSolution solution = ReferenceSolution::oscillatory(k);
  const ProblemKind kind = kind_of(c.text("problem.kind", "ill_posed"));

  std::vector<CaseTask> tasks;
  for (int p : degrees)
    for (int l = plan.min_level; l <= plan.max_level.at(p); ++l) {
      CaseSpec spec(material, solution, params_for(c, p), {kind});
      spec.estimate_condition = true;
      tasks.push_back({meshes[static_cast<std::size_t>(l)], p, spec, g.error_regions});
    }
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  std::string slopes = "p,slope\n";
  std::vector<Curve> curves;
  auto it = results.cbegin();
  for (int p : degrees) {
    const std::string label = fmt::format("p{}", p);
    const auto n = static_cast<std::size_t>(plan.max_level.at(p) - plan.min_level + 1);
    add_table(out, label, g.error_regions, it, n);
    std::vector<double> h, kappa;
    for (std::size_t i = 0; i < n; ++i) {
      h.push_back(it[static_cast<std::ptrdiff_t>(i)].row.h);
      kappa.push_back(*it[static_cast<std::ptrdiff_t>(i)].row.kappa);
    }
    it += static_cast<std::ptrdiff_t>(n);
    out.series[label + ".h"] = h;
    out.series[label + ".kappa"] = kappa;
    if (n >= 2) {
      const double s = loglog_slope(h, kappa);
      out.scalars[label + ".slope"] = s;
      slopes += fmt::format("{},{:.4f}\n", p, s);
    }
    curves.push_back({csv_name(out.experiment, label), 2, kappa_column(g.error_regions.size()), fmt::format("p = {}", p)});
  }
  out.files.push_back({"condition_slopes.csv", slopes});
  script += plot_block("condition.png", fmt::format("condition number, k = {:g}", k), "h", "kappa", curves);
  out.files.push_back({"condition.gp", script});
  return out;
}

ExperimentOutput run_pollution(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "pollution";
  const double k0 = c.number("pollution.k0", 1.0);
  const auto degrees = degrees_of(c);
  const auto kinds = c.words("pollution.kinds", {"ill_posed", "well_posed"});
  const auto betas = c.numbers("pollution.beta2", {0.0});
  const MeshPlan plan = mesh_plan(c, degrees, 3);
  const Geometry g = convex_geometry();
  const auto meshes = mesh_hierarchy(g, plan.spacing, plan.deepest);
  const std::string material_type = c.text("material.type", "smooth");
  const double mu = c.number("material.mu", 1.0), lambda = c.number("material.lambda", 1.25);

  struct Series {
    std::string label;
    int p;
    std::size_t count;
    std::vector<double> ks;
  };
  std::vector<Series> series;
  std::vector<CaseTask> tasks;
  for (int p : degrees)
    for (const auto& kn : kinds) {
      const ProblemKind kind = kind_of(kn);
      for (double beta : betas) {
        if (p == 1 && beta != 0.0) continue;  // no second-order jump for affine elements
        Series s{fmt::format("p{}_{}_beta{}", p, kn, num_label(beta)), p, 0, {}};
        for (int l = plan.min_level; l <= plan.max_level.at(p); ++l) {
          // constant k h: k doubles with every halving of h
          const double k = k0 * std::ldexp(1.0, l - plan.min_level);
          StabilizationParams params = params_for(c, p);
          if (p >= 2) {
            params.beta[1] = beta;
            params.gamma[1] = std::max(params.gamma[1], std::abs(beta));
          }
          const MaterialModel material =
              material_type == "constant" ? MaterialModel::constant(mu, lambda, k) : MaterialModel::smooth(k);
          CaseSpec spec(material, ReferenceSolution::oscillatory(k), params, {kind});
          spec.weighted_k = k;
          spec.weighted_region = Region::B;
          tasks.push_back({meshes[static_cast<std::size_t>(l)], p, spec, g.error_regions});
          s.ks.push_back(k);
          ++s.count;
        }
        series.push_back(std::move(s));
      }
    }
  if (material_type != "smooth" && material_type != "constant")
    throw ConfigError("material.type must be smooth or constant for this experiment");
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  std::string slopes = "series,slope\n";
  std::vector<Curve> curves;
  auto it = results.cbegin();
  for (const auto& s : series) {
    std::string csv = "level,k,h,dofs,weighted,B_rel\n";
    std::vector<double> weighted;
    for (std::size_t i = 0; i < s.count; ++i) {
      const auto& r = it[static_cast<std::ptrdiff_t>(i)];
      weighted.push_back(*r.row.weighted);
      csv += fmt::format("{},{},{},{},{},{}\n", r.row.level, format_number(s.ks[i]), format_number(r.row.h), r.row.dofs,
                         format_number(*r.row.weighted), format_number(r.row.errors[0].relative));
    }
    it += static_cast<std::ptrdiff_t>(s.count);
    out.series[s.label + ".k"] = s.ks;
    out.series[s.label + ".weighted"] = weighted;
    if (s.count >= 2) {
      const double slope = loglog_slope(s.ks, weighted);
      out.scalars[s.label + ".slope"] = slope;
      slopes += fmt::format("{},{:.4f}\n", s.label, slope);
    }
    out.files.push_back({csv_name(out.experiment, s.label), csv});
    curves.push_back({csv_name(out.experiment, s.label), 2, 5, s.label});
  }
  out.files.push_back({"pollution_slopes.csv", slopes});
  script += plot_block("pollution.png", "k ||u - u_h||_B + ||grad(u - u_h)||_B at constant kh", "k", "weighted error",
                       curves);
  out.files.push_back({"pollution.gp", script});
  return out;
}

ExperimentOutput run_split(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "split";
  const double k = c.number("problem.k", 1.0);
  const double xi = c.number("geometry.xi", 0.6);
  const auto degrees = degrees_of(c);
  const auto variants = c.words("split.variants", {"plain", "divergence"});
  const MeshPlan plan = mesh_plan(c, degrees, 3);
  const Geometry g = split_geometry(xi);
  const auto meshes = mesh_hierarchy(g, plan.spacing, plan.deepest);
  const MaterialModel material = smooth_or_constant(c, k, "constant");
  const ReferenceSolution solution = ReferenceSolution::oscillatory(k);
  const ProblemKind kind = kind_of(c.text("problem.kind", "ill_posed"));

  std::vector<CaseTask> tasks;
  for (int p : degrees)
    for (const auto& v : variants) {
      if (v != "plain" && v != "divergence") throw ConfigError("split.variants entries must be plain or divergence");
      for (int l = plan.min_level; l <= plan.max_level.at(p); ++l) {
        CaseSpec spec(material, solution, params_for(c, p), {kind, DataKind::unperturbed, v == "divergence"});
        tasks.push_back({meshes[static_cast<std::size_t>(l)], p, spec, g.error_regions});
      }
    }
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  auto it = results.cbegin();
  std::vector<Curve> minus, plus;
  for (int p : degrees)
    for (const auto& v : variants) {
      const std::string label = fmt::format("p{}_{}", p, v);
      const auto n = static_cast<std::size_t>(plan.max_level.at(p) - plan.min_level + 1);
      add_table(out, label, g.error_regions, it, n);
      it += static_cast<std::ptrdiff_t>(n);
      minus.push_back({csv_name(out.experiment, label), 3, rel_column(0), label});
      plus.push_back({csv_name(out.experiment, label), 3, rel_column(1), label});
    }
  script += plot_block("split_B_minus.png", "relative error in " + region_title(Region::B_minus), "dofs", "error", minus);
  script += plot_block("split_B_plus.png", "relative error in " + region_title(Region::B_plus), "dofs", "error", plus);
  out.files.push_back({"split.gp", script});
  return out;
}

ExperimentOutput run_jump(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "jump";
  const double k = c.number("problem.k", 4.0);
  const double eta = c.number("geometry.xi", 0.6);
  const double lambda = c.number("material.lambda", 1.25);
  const auto degrees = degrees_of(c);
  const auto pairs = mu_pairs(c, "jump.mu_pairs", {"1:2", "2:1"});
  const int samples = c.integer("jump.gate_samples", 100);
  const MeshPlan plan = mesh_plan(c, degrees, 3);
  const Geometry g = split_geometry(eta);
  const ProblemKind kind = kind_of(c.text("problem.kind", "ill_posed"));

  // Interface conditions of the closed-form solution are checked before any solve.
  std::string gate = "mu_plus,mu_minus,displacement_jump,traction_jump\n";
  for (const auto& [mp, mm] : pairs) {
    const MaterialModel material = MaterialModel::plane_jump(mp, mm, eta, lambda, k);
    const ReferenceSolution solution = ReferenceSolution::plane_jump(jump_coefficients(mp, mm, eta, k), eta, k);
    const InterfaceReport rep = verify_interface_conditions(solution, material, samples);
    gate += fmt::format("{:g},{:g},{},{}\n", mp, mm, format_number(rep.displacement_jump), format_number(rep.traction_jump));
    const double worst = std::max(rep.displacement_jump, rep.traction_jump);
    out.scalars[fmt::format("gate_mup{}_mum{}", num_label(mp), num_label(mm))] = worst;
    if (worst > 1e-8)
      throw GateError(fmt::format("interface conditions violated by {:.3e} for mu+ = {:g}, mu- = {:g}", worst, mp, mm));
  }
  out.files.push_back({"jump_gate.csv", gate});

  const auto meshes = mesh_hierarchy(g, plan.spacing, plan.deepest);
  std::vector<CaseTask> tasks;
  for (int p : degrees)
    for (const auto& [mp, mm] : pairs) {
      const MaterialModel material = MaterialModel::plane_jump(mp, mm, eta, lambda, k);
      const ReferenceSolution solution = ReferenceSolution::plane_jump(jump_coefficients(mp, mm, eta, k), eta, k);
      for (int l = plan.min_level; l <= plan.max_level.at(p); ++l) {
        CaseSpec spec(material, solution, params_for(c, p), {kind});
        tasks.push_back({meshes[static_cast<std::size_t>(l)], p, spec, g.error_regions});
      }
    }
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  auto it = results.cbegin();
  for (const auto& [mp, mm] : pairs) {
    std::vector<Curve> curves;
    for (int p : degrees) {
      const std::string label = fmt::format("p{}_mup{}_mum{}", p, num_label(mp), num_label(mm));
      curves.push_back({csv_name(out.experiment, label), 3, rel_column(0), fmt::format("p = {} B_minus", p)});
      curves.push_back({csv_name(out.experiment, label), 3, rel_column(1), fmt::format("p = {} B_plus", p)});
    }
    script += plot_block(fmt::format("jump_mup{}_mum{}.png", num_label(mp), num_label(mm)),
                         fmt::format("mu+ = {:g}, mu- = {:g}, k = {:g}", mp, mm, k), "dofs", "relative error", curves);
  }
  for (int p : degrees)
    for (const auto& [mp, mm] : pairs) {
      const std::string label = fmt::format("p{}_mup{}_mum{}", p, num_label(mp), num_label(mm));
      const auto n = static_cast<std::size_t>(plan.max_level.at(p) - plan.min_level + 1);
      add_table(out, label, g.error_regions, it, n);
      it += static_cast<std::ptrdiff_t>(n);
    }
  out.files.push_back({"jump.gp", script});
  return out;
}

ExperimentOutput run_inclusion(const Config& c, const RunOptions& run) {
  ExperimentOutput out;
  out.experiment = "inclusion";
  const double k = c.number("problem.k", 1.0);
  const double lambda = c.number("material.lambda", 1.25);
  const auto degrees = degrees_of(c);
  const auto pairs = mu_pairs(c, "inclusion.mu_pairs", {"1:1", "1:2", "2:1", "2:2"});
  const MeshPlan plan = mesh_plan(c, degrees, 3);
  const Geometry g = inclusion_geometry();
  const auto meshes = mesh_hierarchy(g, plan.spacing, plan.deepest);
  const ProblemKind kind = kind_of(c.text("problem.kind", "ill_posed"));
  const ReferenceSolution solution = ReferenceSolution::inclusion(inclusion_rect(), k);

  std::vector<CaseTask> tasks;
  for (int p : degrees)
    for (const auto& [mi, me] : pairs) {
      const MaterialModel material = MaterialModel::inclusion(mi, me, inclusion_rect(), lambda, k);
      for (int l = plan.min_level; l <= plan.max_level.at(p); ++l) {
        CaseSpec spec(material, solution, params_for(c, p), {kind});
        tasks.push_back({meshes[static_cast<std::size_t>(l)], p, spec, g.error_regions});
      }
    }
  const auto results = run_cases(tasks, run.threads);

  std::string script = plot_header();
  auto it = results.cbegin();
  std::vector<Curve> curves;
  for (int p : degrees)
    for (const auto& [mi, me] : pairs) {
      const std::string label = fmt::format("p{}_mui{}_mue{}", p, num_label(mi), num_label(me));
      const auto n = static_cast<std::size_t>(plan.max_level.at(p) - plan.min_level + 1);
      add_table(out, label, g.error_regions, it, n);
      it += static_cast<std::ptrdiff_t>(n);
      curves.push_back({csv_name(out.experiment, label), 3, rel_column(0), label + " B_minus"});
      curves.push_back({csv_name(out.experiment, label), 3, rel_column(1), label + " B_plus"});
    }
  script += plot_block("inclusion.png", fmt::format("data at the bottom only, k = {:g}", k), "dofs", "relative error",
                       curves);
  out.files.push_back({"inclusion.gp", script});
  return out;
}

ExperimentOutput run_experiment(const std::string& name, const Config& config, const RunOptions& run) {
  if (name == "sweep") return run_sweep(config, run);
  if (name == "convergence") return run_convergence(config, run);
  if (name == "pollution") return run_pollution(config, run);
  if (name == "split") return run_split(config, run);
  if (name == "jump") return run_jump(config, run);
  if (name == "inclusion") return run_inclusion(config, run);
  if (name == "condition") return run_condition(config, run);
  throw ConfigError("unknown experiment '" + name + "'");
}

void write_output(const ExperimentOutput& output, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& f : output.files) {
    std::ofstream os(dir / f.name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / f.name).string());
    os << f.content;
  }
}

}  // namespace ucfem
