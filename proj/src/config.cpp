#include "curvecomp/config.hpp"

#include "curvecomp/design_search.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace curvecomp {

using nlohmann::json;

namespace {

std::string describe(const std::string& source, int line, const std::string& path, const std::string& message) {
  std::ostringstream out;
  out << source;
  if (line > 0) out << ':' << line;
  out << ": ";
  if (!path.empty()) out << path << ": ";
  out << message;
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string path, const std::string& message)
    : InvalidArgument(describe(source, line, path, message)), line_(line), path_(std::move(path)) {}

std::string_view task_name(Task task) {
  switch (task) {
    case Task::optimize: return "optimize";
    case Task::evaluate: return "evaluate";
    case Task::simulate: return "simulate";
  }
  return "?";
}

namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

class Reader {
 public:
  Reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ConfigError(source_, line_of(path), path, message);
  }

  int line_at_offset(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }

  // Follows the object keys of `path` through the raw text; array indices and
  // keys that cannot be found leave the position at the deepest match.
  int line_of(const std::string& path) const {
    std::size_t pos = 0;
    bool found_any = false;
    std::size_t start = 1;
    while (start <= path.size() && !path.empty()) {
      auto end = path.find('/', start);
      if (end == std::string::npos) end = path.size();
      const std::string key = path.substr(start, end - start);
      start = end + 1;
      if (key.empty() || std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) break;
      const auto hit = text_.find('"' + key + '"', pos);
      if (hit == std::string_view::npos) break;
      pos = hit;
      found_any = true;
    }
    return found_any ? line_at_offset(pos) : 0;
  }

  const json& object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(path + "/" + key, "unknown key '" + key + "'");
      }
    }
    return j;
  }

  const json& required(const json& obj, const std::string& path, const std::string& key) const {
    if (!obj.contains(key)) fail(path + "/" + key, "missing required key '" + key + "'");
    return obj.at(key);
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }

  long long integer(const json& j, const std::string& path, long long lo, long long hi) const {
    const double v = number(j, path);
    if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi)) {
      fail(path, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<long long>(v);
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
    return out;
  }

  template <class F>
  auto guarded(const std::string& path, F&& make) const {
    try {
      return make();
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      fail(path, e.what());
    }
  }

 private:
  std::string_view text_;
  std::string source_;
};

struct GroupSpec {
  RegressionModel model;
  TriangularKernel kernel;
  int n;
};

GroupSpec read_group(const Reader& r, const json& root, const std::string& key) {
  const std::string path = "/" + key;
  const json& g = r.object(r.required(root, "", key), path, {"model", "kernel", "n"});
  const json& model_json = r.required(g, path, "model");
  const std::string model_path = path + "/model";
  RegressionModel model = r.guarded(model_path, [&] {
    if (model_json.is_string()) return RegressionModel::preset(model_json.get<std::string>());
    if (!model_json.is_array()) r.fail(model_path, "expected a preset name or a list of basis functions");
    std::vector<BasisFunction> basis;
    for (std::size_t i = 0; i < model_json.size(); ++i) {
      const std::string item_path = model_path + "/" + std::to_string(i);
      const std::string text = r.string(model_json[i], item_path);
      basis.push_back(r.guarded(item_path, [&] { return BasisFunction::parse(text); }));
    }
    return RegressionModel(std::move(basis));
  });
  const std::string kernel_text = r.string(r.required(g, path, "kernel"), path + "/kernel");
  TriangularKernel kernel = r.guarded(path + "/kernel", [&] { return TriangularKernel::parse(kernel_text); });
  const int n = static_cast<int>(r.integer(r.required(g, path, "n"), path + "/n", 2, 1000));
  return {std::move(model), std::move(kernel), n};
}

PsoConfig read_pso(const Reader& r, const json& root, std::uint64_t seed) {
  PsoConfig cfg;
  cfg.seed = seed;
  if (!root.contains("pso")) return cfg;
  const json& p = r.object(root.at("pso"), "/pso",
                           {"particles", "iterations", "inertia", "cognitive", "social", "restarts", "threads",
                            "polish_evaluations"});
  if (p.contains("particles")) cfg.particles = static_cast<int>(r.integer(p["particles"], "/pso/particles", 1, 100000));
  if (p.contains("iterations")) cfg.iterations = static_cast<int>(r.integer(p["iterations"], "/pso/iterations", 1, 10000000));
  if (p.contains("restarts")) cfg.restarts = static_cast<int>(r.integer(p["restarts"], "/pso/restarts", 1, 10000));
  if (p.contains("threads")) cfg.threads = static_cast<unsigned>(r.integer(p["threads"], "/pso/threads", 0, 1024));
  if (p.contains("polish_evaluations")) {
    cfg.polish_evaluations = static_cast<int>(r.integer(p["polish_evaluations"], "/pso/polish_evaluations", 0, 100000000));
  }
  if (p.contains("inertia")) cfg.inertia = r.number(p["inertia"], "/pso/inertia");
  if (p.contains("cognitive")) cfg.cognitive = r.number(p["cognitive"], "/pso/cognitive");
  if (p.contains("social")) cfg.social = r.number(p["social"], "/pso/social");
  r.guarded("/pso", [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

SimulationSettings read_simulation(const Reader& r, const json& root, const ComparisonProblem& problem) {
  const json& s = r.object(r.required(root, "", "simulation"), "/simulation",
                           {"theta1", "theta2", "replications", "alpha", "bootstrap_reps", "grid_points",
                            "noise_scale", "estimator", "threads"});
  SimulationSettings out;
  out.theta1 = r.numbers(r.required(s, "/simulation", "theta1"), "/simulation/theta1");
  out.theta2 = r.numbers(r.required(s, "/simulation", "theta2"), "/simulation/theta2");
  if (static_cast<int>(out.theta1.size()) != problem.model1.dim()) {
    r.fail("/simulation/theta1", "expected " + std::to_string(problem.model1.dim()) + " parameters for group 1");
  }
  if (static_cast<int>(out.theta2.size()) != problem.model2.dim()) {
    r.fail("/simulation/theta2", "expected " + std::to_string(problem.model2.dim()) + " parameters for group 2");
  }
  if (s.contains("replications")) out.replications = static_cast<int>(r.integer(s["replications"], "/simulation/replications", 1, 10000000));
  if (s.contains("bootstrap_reps")) out.bootstrap_reps = static_cast<int>(r.integer(s["bootstrap_reps"], "/simulation/bootstrap_reps", 1, 10000000));
  if (s.contains("grid_points")) out.grid_points = static_cast<int>(r.integer(s["grid_points"], "/simulation/grid_points", 1, 1000000));
  if (s.contains("threads")) out.threads = static_cast<unsigned>(r.integer(s["threads"], "/simulation/threads", 0, 1024));
  if (s.contains("alpha")) {
    out.alpha = r.number(s["alpha"], "/simulation/alpha");
    if (!(out.alpha > 0.0 && out.alpha < 1.0)) r.fail("/simulation/alpha", "alpha must lie in (0, 1)");
  }
  if (s.contains("noise_scale")) {
    out.noise_scale = r.number(s["noise_scale"], "/simulation/noise_scale");
    if (!(out.noise_scale > 0.0)) r.fail("/simulation/noise_scale", "noise_scale must be positive");
  }
  if (s.contains("estimator")) {
    const std::string e = r.string(s["estimator"], "/simulation/estimator");
    if (e == "optimal") {
      out.estimator = EstimatorKind::optimal;
    } else if (e == "wlse") {
      out.estimator = EstimatorKind::wlse;
    } else {
      r.fail("/simulation/estimator", "expected \"optimal\" or \"wlse\"");
    }
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
  const Reader r(text, source);
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(source, r.line_at_offset(e.byte > 0 ? e.byte - 1 : 0), "", std::string("invalid JSON: ") + e.what());
  }
  r.object(root, "", {"task", "interval", "group1", "group2", "p", "pso", "simulation", "designs", "output_dir", "seed"});

  const std::string task_text = r.string(r.required(root, "", "task"), "/task");
  Task task;
  if (task_text == "optimize") {
    task = Task::optimize;
  } else if (task_text == "evaluate") {
    task = Task::evaluate;
  } else if (task_text == "simulate") {
    task = Task::simulate;
  } else {
    r.fail("/task", "expected \"optimize\", \"evaluate\" or \"simulate\"");
  }

  const json& ivj = r.object(r.required(root, "", "interval"), "/interval", {"a", "b"});
  const double a = r.number(r.required(ivj, "/interval", "a"), "/interval/a");
  const double b = r.number(r.required(ivj, "/interval", "b"), "/interval/b");
  const Interval iv = r.guarded("/interval", [&] { return Interval(a, b); });

  GroupSpec g1 = read_group(r, root, "group1");
  GroupSpec g2 = read_group(r, root, "group2");

  double p = kInfinity;
  if (root.contains("p")) {
    const json& pj = root["p"];
    if (pj.is_string()) {
      if (pj.get<std::string>() != "inf") r.fail("/p", "expected \"inf\" or a number >= 1");
    } else {
      p = r.number(pj, "/p");
      if (!(p >= 1.0)) r.fail("/p", "criterion order must be >= 1");
    }
  }

  std::uint64_t seed = 1;
  if (root.contains("seed")) {
    seed = static_cast<std::uint64_t>(r.integer(root["seed"], "/seed", 0, static_cast<long long>(kMaxExactInteger)));
  }

  ComparisonProblem problem{g1.model, g2.model, g1.kernel, g2.kernel, iv, g1.n, g2.n, p};
  r.guarded("/group1/n", [&] {
    problem.validate();
    return 0;
  });
  for (int i = 0; i < 2; ++i) {
    const std::string path = i == 0 ? "/group1/kernel" : "/group2/kernel";
    r.guarded(path, [&] {
      problem.kernel(i).validate_on(iv);
      return 0;
    });
  }

  RunConfig cfg{task, std::move(problem), read_pso(r, root, seed), std::nullopt, DesignChoice::uniform,
                std::nullopt, "out", seed};
  cfg.design_choice = task == Task::optimize ? DesignChoice::optimal : DesignChoice::uniform;

  if (root.contains("output_dir")) {
    cfg.output_dir = r.string(root["output_dir"], "/output_dir");
    if (cfg.output_dir.empty()) r.fail("/output_dir", "must not be empty");
  }

  if (root.contains("designs")) {
    const json& dj = root["designs"];
    if (dj.is_string()) {
      const std::string choice = dj.get<std::string>();
      if (choice == "uniform") {
        cfg.design_choice = DesignChoice::uniform;
      } else if (choice == "optimal") {
        cfg.design_choice = DesignChoice::optimal;
      } else {
        r.fail("/designs", "expected \"uniform\", \"optimal\" or explicit point lists");
      }
    } else {
      r.object(dj, "/designs", {"group1", "group2"});
      std::vector<GroupDesign> groups;
      for (int i = 0; i < 2; ++i) {
        const std::string key = i == 0 ? "group1" : "group2";
        const std::string path = "/designs/" + key;
        std::vector<double> pts = r.numbers(r.required(dj, "/designs", key), path);
        if (static_cast<int>(pts.size()) != cfg.problem.n(i)) {
          r.fail(path, "expected " + std::to_string(cfg.problem.n(i)) + " points (group n)");
        }
        groups.push_back(r.guarded(path, [&] { return GroupDesign(std::move(pts), iv); }));
      }
      cfg.designs = DesignPair{groups[0], groups[1]};
      cfg.design_choice = DesignChoice::explicit_points;
    }
    if (task == Task::optimize && cfg.design_choice != DesignChoice::optimal) {
      r.fail("/designs", "the optimize task searches the designs itself; remove this key or set it to \"optimal\"");
    }
  }

  if (task == Task::simulate) {
    cfg.simulation = read_simulation(r, root, cfg.problem);
  } else if (root.contains("simulation")) {
    r.fail("/simulation", "only used by the simulate task");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "", "cannot read configuration file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace curvecomp
