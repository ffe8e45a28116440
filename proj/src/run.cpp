#include "curvecomp/run.hpp"

#include "curvecomp/design_search.hpp"
#include "curvecomp/estimator.hpp"
#include "curvecomp/report.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>

namespace curvecomp {

using nlohmann::json;

namespace {

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  const double r = round12(x);
  if (r == std::floor(r) && std::abs(r) < 1e15) return static_cast<long long>(r);
  return r;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

json list_json(std::span<const double> xs) {
  json out = json::array();
  for (const double x : xs) out.push_back(number(x));
  return out;
}

json group_json(const RunConfig& cfg, int i, const GroupDesign& design, const EstimatorSpec& spec,
                const Matrix& variance) {
  json omegas = json::array();
  for (const Vector& w : spec.weights.omegas) omegas.push_back(vector_json(w));
  json gammas = json::array();
  for (const Vector& g : spec.weights.gammas) gammas.push_back(vector_json(g));
  json coefficients = json::array();
  for (const Vector& c : spec.coefficients) coefficients.push_back(vector_json(c));
  return {
      {"model", cfg.problem.model(i).name()},
      {"kernel", cfg.problem.kernel(i).name()},
      {"n", cfg.problem.n(i)},
      {"points", list_json(design.points())},
      {"omegas", std::move(omegas)},
      {"gammas", std::move(gammas)},
      {"coefficients", std::move(coefficients)},
      {"variance", matrix_json(variance)},
  };
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path.string(), 0, "/output_dir", "cannot open output file for writing");
  out << text;
  if (!out) throw ConfigError(path.string(), 0, "/output_dir", "failed writing output file");
}

std::string_view design_choice_name(DesignChoice c) {
  switch (c) {
    case DesignChoice::uniform: return "uniform";
    case DesignChoice::optimal: return "optimal";
    case DesignChoice::explicit_points: return "explicit";
  }
  return "?";
}

}  // namespace

RunOutputs execute(const RunConfig& cfg) {
  const CriterionEvaluator evaluator(cfg.problem);

  std::optional<DesignSearchResult> search;
  DesignPair designs = uniform_design_pair(cfg.problem);
  switch (cfg.design_choice) {
    case DesignChoice::uniform: break;
    case DesignChoice::explicit_points: designs = *cfg.designs; break;
    case DesignChoice::optimal:
      search = optimize_design_pair(cfg.problem, cfg.pso);
      designs = search->best;
      break;
  }

  const CriterionReport report = evaluator.report(designs);

  json record;
  record["task"] = std::string(task_name(cfg.task));
  record["seed"] = cfg.seed;
  record["p"] = std::isinf(cfg.problem.p) ? json("inf") : number(cfg.problem.p);
  record["interval"] = {{"a", number(cfg.problem.interval.a())}, {"b", number(cfg.problem.interval.b())}};
  record["designs"] = std::string(design_choice_name(cfg.design_choice));
  double lower_max = 0.0;
  for (const auto& pt : report.curve) lower_max = std::max(lower_max, pt.lower_bound);
  record["criterion"] = {
      {"value", number(report.value)},
      {"argmax_t", report.argmax_t ? number(*report.argmax_t) : json(nullptr)},
      {"lower_bound_max", number(lower_max)},
  };
  for (int i = 0; i < 2; ++i) {
    const EstimatorSpec spec = make_optimal_estimator(evaluator.transformed(i), designs[i], i + 1);
    record[i == 0 ? "group1" : "group2"] = group_json(cfg, i, designs[i], spec, report.variances[i]);
  }
  if (search) {
    record["search"] = {
        {"evaluations", search->evaluations},
        {"brownian_value", number(search->brownian_value)},
        {"history", list_json(search->history)},
        {"particles", cfg.pso.particles},
        {"iterations", cfg.pso.iterations},
        {"restarts", cfg.pso.restarts},
        {"polish_evaluations", cfg.pso.polish_evaluations},
    };
  }

  std::optional<CoverageResult> coverage;
  if (cfg.task == Task::simulate) {
    const SimulationSettings& s = *cfg.simulation;
    SimulationPlan plan{cfg.problem,
                        designs,
                        Eigen::Map<const Vector>(s.theta1.data(), static_cast<Eigen::Index>(s.theta1.size())),
                        Eigen::Map<const Vector>(s.theta2.data(), static_cast<Eigen::Index>(s.theta2.size())),
                        s.replications,
                        s.alpha,
                        s.bootstrap_reps,
                        s.grid_points,
                        cfg.seed,
                        s.noise_scale,
                        s.estimator,
                        s.threads};
    coverage = coverage_experiment(plan);
    record["simulation"] = {
        {"coverage", number(coverage->coverage)},
        {"mean_maxwidth", number(coverage->mean_maxwidth)},
        {"replications", coverage->replications},
        {"alpha", number(s.alpha)},
        {"estimator", s.estimator == EstimatorKind::optimal ? "optimal" : "wlse"},
    };
  }

  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(cfg.output_dir, 0, "/output_dir", "cannot create output directory: " + ec.message());

  RunOutputs outputs;
  outputs.criterion_value = report.value;
  outputs.design = dir / "design.json";
  outputs.criterion_curve = dir / "criterion_curve.csv";
  write_text(outputs.design, record.dump(2) + "\n");
  write_text(outputs.criterion_curve, write_table(criterion_curve_table(report)));
  if (coverage) {
    outputs.band = dir / "band.csv";
    outputs.summary = dir / "summary.csv";
    write_text(*outputs.band, write_table(band_table(*coverage)));
    write_text(*outputs.summary, write_table(summary_table(*coverage, cfg.simulation->alpha, cfg.seed)));
  }
  return outputs;
}

int run(const std::string& config_path, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& output_dir_override) {
  try {
    RunConfig cfg = load_config(config_path);
    if (output_dir_override) cfg.output_dir = *output_dir_override;
    const RunOutputs outputs = execute(cfg);
    out << task_name(cfg.task) << ": criterion value " << format12(outputs.criterion_value) << "\n";
    out << "wrote " << outputs.design.string() << "\n";
    out << "wrote " << outputs.criterion_curve.string() << "\n";
    if (outputs.band) out << "wrote " << outputs.band->string() << "\n";
    if (outputs.summary) out << "wrote " << outputs.summary->string() << "\n";
    return kExitSuccess;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace curvecomp
