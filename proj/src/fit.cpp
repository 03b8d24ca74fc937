#include "purodyn/fit.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "purodyn/parallel.hpp"

namespace purodyn {

namespace {

double checked_eval(const Objective& objective, const RealVector& x) {
  const double f = objective(x);
  if (!std::isfinite(f)) {
    std::ostringstream msg;
    msg << "objective returned " << f << " at x = [";
    for (Index i = 0; i < x.size(); ++i) {
      if (i) msg << ", ";
      if (i == 8 && x.size() > 9) {
        msg << "...";
        break;
      }
      msg << x[i];
    }
    msg << "]";
    throw ObjectiveNonFinite(msg.str());
  }
  return f;
}

void require_config(const OptimizerConfig& cfg, Index n) {
  if (!(cfg.fd_step > 0.0)) throw Error("optimizer fd_step must be positive");
  if (cfg.max_iterations < 0) throw Error("optimizer max_iterations must be >= 0");
  if (cfg.restarts < 1) throw Error("optimizer restarts must be >= 1");
  if (cfg.bounds) {
    if (static_cast<Index>(cfg.bounds->size()) != n) {
      throw LengthMismatch("optimizer bounds length does not match the parameter count");
    }
    for (const auto& [lo, hi] : *cfg.bounds) {
      if (!(lo <= hi)) throw Error("optimizer bounds must satisfy lo <= hi");
    }
  }
}

RealVector project(const RealVector& x, const OptimizerConfig& cfg) {
  if (!cfg.bounds) return x;
  RealVector out = x;
  for (Index i = 0; i < x.size(); ++i) {
    const auto& [lo, hi] = (*cfg.bounds)[static_cast<std::size_t>(i)];
    out[i] = std::min(std::max(out[i], lo), hi);
  }
  return out;
}

// Gradient with bound-active components zeroed; its norm is the
// convergence measure under box constraints.
RealVector projected_gradient(const RealVector& x, const RealVector& g,
                              const OptimizerConfig& cfg) {
  if (!cfg.bounds) return g;
  RealVector out = g;
  for (Index i = 0; i < x.size(); ++i) {
    const auto& [lo, hi] = (*cfg.bounds)[static_cast<std::size_t>(i)];
    if (x[i] <= lo + 1e-14 && g[i] > 0.0) out[i] = 0.0;
    if (x[i] >= hi - 1e-14 && g[i] < 0.0) out[i] = 0.0;
  }
  return out;
}

struct LbfgsMemory {
  std::deque<RealVector> s, y;
  std::deque<double> rho;

  void push(const RealVector& si, const RealVector& yi, int cap) {
    const double sy = si.dot(yi);
    if (!(sy > 1e-12 * si.norm() * yi.norm())) return;  // keep curvature positive
    s.push_back(si);
    y.push_back(yi);
    rho.push_back(1.0 / sy);
    while (static_cast<int>(s.size()) > cap) {
      s.pop_front();
      y.pop_front();
      rho.pop_front();
    }
  }

  void clear() {
    s.clear();
    y.clear();
    rho.clear();
  }

  RealVector direction(const RealVector& g) const {
    RealVector q = g;
    const int m = static_cast<int>(s.size());
    std::vector<double> alpha(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    if (m > 0) {
      const double gamma = s.back().dot(y.back()) / y.back().dot(y.back());
      q *= gamma;
    }
    for (int i = 0; i < m; ++i) {
      const double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return -q;
  }
};

FitResult run_single(const Objective& objective, const RealVector& x_init,
                     const OptimizerConfig& cfg) {
  FitResult res;
  RealVector x = project(x_init, cfg);
  double f = checked_eval(objective, x);
  RealVector g = fd_gradient(objective, x, cfg.fd_step);
  res.value_history.push_back(f);

  LbfgsMemory mem;
  int iter = 0;
  for (; iter < cfg.max_iterations; ++iter) {
    const RealVector pg = projected_gradient(x, g, cfg);
    if (pg.norm() < cfg.gradient_tolerance) {
      res.converged = true;
      break;
    }

    RealVector d = mem.direction(g);
    if (!(d.dot(pg) < -1e-14 * d.norm() * pg.norm())) {
      mem.clear();
      d = -pg;
    }

    double alpha = mem.s.empty() ? std::min(1.0, 1.0 / std::max(1e-12, pg.norm())) : 1.0;
    bool accepted = false;
    RealVector xt;
    double ft = f;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      xt = project(x + alpha * d, cfg);
      const RealVector step = xt - x;
      if (step.norm() == 0.0) break;
      ft = checked_eval(objective, xt);
      if (ft <= f + 1e-4 * g.dot(step) && ft < f) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no further decrease along this direction

    const RealVector gt = fd_gradient(objective, xt, cfg.fd_step);
    mem.push(xt - x, gt - g, cfg.memory);
    x = xt;
    f = ft;
    g = gt;
    res.value_history.push_back(f);
  }

  res.best_params = x;
  res.best_value = f;
  res.iterations = iter;
  if (!res.converged) {
    res.converged = projected_gradient(x, g, cfg).norm() < cfg.gradient_tolerance;
  }
  return res;
}

}  // namespace

RealVector fd_gradient(const Objective& objective, const RealVector& x, double h) {
  RealVector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    RealVector xp = x;
    RealVector xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (checked_eval(objective, xp) - checked_eval(objective, xm)) / (2.0 * h);
  }
  return g;
}

FitResult optimize(const Objective& objective, const RealVector& x0,
                   const OptimizerConfig& cfg) {
  require_config(cfg, x0.size());
  checked_eval(objective, x0);

  std::vector<RealVector> starts;
  starts.reserve(static_cast<std::size_t>(cfg.restarts));
  starts.push_back(x0);
  for (int k = 1; k < cfg.restarts; ++k) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
    RealVector xs(x0.size());
    for (Index i = 0; i < x0.size(); ++i) {
      double lo = -1.0, hi = 1.0;
      if (cfg.bounds) {
        const auto& [blo, bhi] = (*cfg.bounds)[static_cast<std::size_t>(i)];
        lo = std::max(lo, blo);
        hi = std::min(hi, bhi);
        if (lo > hi) {  // bounds box lies outside [-1, 1]
          lo = blo;
          hi = bhi;
        }
      }
      std::uniform_real_distribution<double> dist(lo, hi);
      xs[i] = dist(rng);
    }
    starts.push_back(std::move(xs));
  }

  std::vector<FitResult> results(starts.size());
  parallel_for_index(static_cast<int>(starts.size()), [&](int k) {
    results[static_cast<std::size_t>(k)] =
        run_single(objective, starts[static_cast<std::size_t>(k)], cfg);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (results[k].best_value < results[best].best_value) best = k;
  }
  return results[best];
}

double objective_dissipator_match(const RealVector& interaction_params,
                                  const LindbladModel& model,
                                  const std::vector<DensityMatrix>& probe_states) {
  if (probe_states.empty()) throw Error("dissipator match needs at least one probe state");
  const Index d = model.dim();
  const ComplexMatrix h_sb = params_to_hermitian(interaction_params, d * d);
  double sum = 0.0;
  for (const DensityMatrix& rho : probe_states) {
    if (rho.dim() != d) {
      throw DimensionMismatch("probe state dimension does not match the model");
    }
    const ComplexMatrix target = gksl_dissipator(model, rho.matrix());
    const ComplexMatrix actual = effective_dissipator(h_sb, rho);
    sum += (target - actual).squaredNorm();
  }
  return sum;
}

namespace {

std::vector<std::size_t> grid_indices(const std::vector<double>& times,
                                      const std::vector<double>& grid) {
  std::vector<std::size_t> idx;
  idx.reserve(times.size());
  std::size_t j = 0;
  for (double t : times) {
    while (j < grid.size() && grid[j] < t - 1e-9) ++j;
    if (j >= grid.size() || std::abs(grid[j] - t) > 1e-9) {
      std::ostringstream msg;
      msg << "target time " << t << " is not on the propagation grid";
      throw GridMismatch(msg.str());
    }
    idx.push_back(j);
  }
  return idx;
}

}  // namespace

double objective_trajectory(const RealVector& interaction_params,
                            const Trajectory& target,
                            const PropagationProblem& problem) {
  if (target.times.empty()) throw GridMismatch("target trajectory is empty");
  const std::vector<std::size_t> idx = grid_indices(target.times, problem.grid);
  const TotalHamiltonian ht = problem.hamiltonian(interaction_params);
  const PurifiedTrajectory traj = propagate(ht, problem.psi0, problem.grid, problem.options);
  double sum = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    sum += (traj.reduced_states[idx[k]].matrix() - target.states[k].matrix()).squaredNorm();
  }
  return sum / static_cast<double>(idx.size());
}

double objective_terminal(const RealVector& interaction_params,
                          const DensityMatrix& rho_target, double t_c,
                          const PropagationProblem& problem) {
  const std::vector<std::size_t> idx = grid_indices({t_c}, problem.grid);
  const TotalHamiltonian ht = problem.hamiltonian(interaction_params);
  const PurifiedTrajectory traj = propagate(ht, problem.psi0, problem.grid, problem.options);
  return (traj.reduced_states[idx[0]].matrix() - rho_target.matrix()).squaredNorm();
}

double unitary_infidelity(const ComplexMatrix& u, const ComplexMatrix& u_target) {
  if (u.rows() != u_target.rows() || u.cols() != u_target.cols() ||
      u_target.rows() != u_target.cols()) {
    throw DimensionMismatch("unitary_infidelity: dimension mismatch");
  }
  const Index n = u_target.rows();
  const double residual = (u_target.adjoint() * u_target - identity(n)).norm();
  if (!(residual <= 1e-8)) {
    std::ostringstream msg;
    msg << "target is not unitary (residual " << residual << ")";
    throw NonUnitaryTarget(msg.str());
  }
  const double overlap = std::abs((u.adjoint() * u_target).trace());
  return 1.0 - overlap / static_cast<double>(n);
}

}  // namespace purodyn
