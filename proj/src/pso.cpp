#include "curvecomp/pso.hpp"

#include "curvecomp/error.hpp"
#include "curvecomp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace curvecomp {

void PsoConfig::validate() const {
  if (particles < 1 || iterations < 1 || restarts < 1 || polish_evaluations < 0) {
    throw InvalidArgument("PSO particles, iterations and restarts must be positive");
  }
  if (!(inertia > 0.0 && inertia < 1.0) || !(cognitive > 0.0) || !(social > 0.0)) {
    throw InvalidArgument("PSO inertia must lie in (0, 1) and the acceleration coefficients must be positive");
  }
}

namespace {

// Uniform draw on [0, 1) built from raw engine bits so the sequence does not
// depend on the standard library's distribution implementation.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Particle {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> best_x;
  double value = kInf;
  double best_value = kInf;
  std::mt19937_64 rng;

  static constexpr double kInf = std::numeric_limits<double>::infinity();
};

double safe_eval(const Objective& objective, std::span<const double> x) {
  const double y = objective(x);
  return std::isfinite(y) ? y : std::numeric_limits<double>::infinity();
}

// Nelder–Mead from x0 with points clamped into the box; returns the number of
// evaluations used. x0/value are updated in place when an improvement is found.
long nelder_mead(const Objective& objective, const Bounds& bounds, std::vector<double>& x0, double& value,
                 int budget) {
  const std::size_t dim = bounds.size();
  if (dim == 0 || budget <= static_cast<int>(dim)) return 0;
  long used = 0;
  auto eval = [&](std::vector<double>& x) {
    for (std::size_t d = 0; d < dim; ++d) x[d] = std::clamp(x[d], bounds[d].first, bounds[d].second);
    ++used;
    return safe_eval(objective, x);
  };

  std::vector<std::vector<double>> simplex(dim + 1, x0);
  std::vector<double> f(dim + 1, value);
  for (std::size_t d = 0; d < dim; ++d) {
    const auto [lo, hi] = bounds[d];
    const double step = 0.05 * (hi - lo);
    simplex[d + 1][d] += (x0[d] + step <= hi) ? step : -step;
    f[d + 1] = eval(simplex[d + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto affine = [&](const std::vector<double>& from, double coef, std::vector<double>& out) {
    for (std::size_t d = 0; d < dim; ++d) out[d] = centroid[d] + coef * (from[d] - centroid[d]);
  };
  while (used + 2 <= budget) {
    for (std::size_t k = 0; k <= dim; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];
    if (!(f[worst] - f[best] > 1e-15 * (std::abs(f[best]) + 1e-300))) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[k][d] / static_cast<double>(dim);
    }
    affine(simplex[worst], -1.0, trial);
    const double fr = eval(trial);
    if (fr < f[best]) {
      affine(simplex[worst], -2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        f[worst] = fe;
      } else {
        simplex[worst] = trial;
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      simplex[worst] = trial;
      f[worst] = fr;
    } else {
      affine(simplex[worst], fr < f[worst] ? -0.5 : 0.5, trial2);
      const double fc = eval(trial2);
      if (fc < std::min(fr, f[worst])) {
        simplex[worst] = trial2;
        f[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= dim; ++k) {
          if (k == best) continue;
          for (std::size_t d = 0; d < dim; ++d) simplex[k][d] = simplex[best][d] + 0.5 * (simplex[k][d] - simplex[best][d]);
          f[k] = eval(simplex[k]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  if (f[best] < value) {
    value = f[best];
    x0 = simplex[best];
  }
  return used;
}

}  // namespace

PsoResult pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& cfg,
                       std::span<const std::vector<double>> seeds) {
  cfg.validate();
  const std::size_t dim = bounds.size();
  for (const auto& [lo, hi] : bounds) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi)) throw InvalidArgument("PSO bounds must be finite with lo <= hi");
  }
  for (const auto& s : seeds) {
    if (s.size() != dim) throw InvalidArgument("PSO seed point has the wrong dimension");
  }

  PsoResult result;
  result.value = std::numeric_limits<double>::infinity();
  result.argmin.assign(dim, 0.0);
  for (std::size_t d = 0; d < dim; ++d) result.argmin[d] = 0.5 * (bounds[d].first + bounds[d].second);
  result.history.reserve(static_cast<std::size_t>(cfg.iterations) * cfg.restarts);

  auto clamp_to_box = [&](std::vector<double>& x, std::vector<double>* v) {
    for (std::size_t d = 0; d < dim; ++d) {
      const auto [lo, hi] = bounds[d];
      if (x[d] < lo || x[d] > hi) {
        x[d] = std::clamp(x[d], lo, hi);
        if (v) (*v)[d] = 0.0;
      }
    }
  };

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    const std::uint64_t restart_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(restart));
    std::vector<Particle> swarm(cfg.particles);
    for (int p = 0; p < cfg.particles; ++p) {
      Particle& particle = swarm[p];
      particle.rng.seed(mix_seed(restart_seed, static_cast<std::uint64_t>(p)));
      particle.x.resize(dim);
      particle.v.resize(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        const auto [lo, hi] = bounds[d];
        particle.x[d] = lo + (hi - lo) * unit(particle.rng);
        const double target = lo + (hi - lo) * unit(particle.rng);
        particle.v[d] = 0.5 * (target - particle.x[d]);
      }
      if (static_cast<std::size_t>(p) < seeds.size()) {
        particle.x = seeds[p];
        clamp_to_box(particle.x, nullptr);
      }
    }

    std::vector<double> global_x = swarm.front().x;
    double global_value = std::numeric_limits<double>::infinity();

    auto evaluate_swarm = [&] {
      parallel_for(swarm.size(), cfg.threads, [&](std::size_t p) {
        swarm[p].value = safe_eval(objective, swarm[p].x);
      });
      result.evaluations += static_cast<long>(swarm.size());
      for (Particle& particle : swarm) {
        if (particle.value < particle.best_value || particle.best_x.empty()) {
          particle.best_value = particle.value;
          particle.best_x = particle.x;
        }
        if (particle.best_value < global_value) {
          global_value = particle.best_value;
          global_x = particle.best_x;
        }
      }
    };

    evaluate_swarm();
    for (int iter = 0; iter < cfg.iterations; ++iter) {
      for (Particle& particle : swarm) {
        for (std::size_t d = 0; d < dim; ++d) {
          const double range = bounds[d].second - bounds[d].first;
          const double r1 = unit(particle.rng);
          const double r2 = unit(particle.rng);
          double v = cfg.inertia * particle.v[d] + cfg.cognitive * r1 * (particle.best_x[d] - particle.x[d]) +
                     cfg.social * r2 * (global_x[d] - particle.x[d]);
          particle.v[d] = std::clamp(v, -range, range);
          particle.x[d] += particle.v[d];
        }
        clamp_to_box(particle.x, &particle.v);
      }
      evaluate_swarm();
      const double best_so_far = std::min(result.value, global_value);
      result.history.push_back(best_so_far);
    }

    if (global_value < result.value) {
      result.value = global_value;
      result.argmin = global_x;
    }
  }
  if (cfg.polish_evaluations > 0 && std::isfinite(result.value)) {
    result.evaluations += nelder_mead(objective, bounds, result.argmin, result.value, cfg.polish_evaluations);
    result.history.push_back(result.value);
  }
  return result;
}

}  // namespace curvecomp
