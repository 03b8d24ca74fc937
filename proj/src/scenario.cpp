#include "purodyn/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "purodyn/channels.hpp"
#include "purodyn/circuit.hpp"
#include "purodyn/digest.hpp"
#include "purodyn/fit.hpp"
#include "purodyn/lindblad.hpp"
#include "purodyn/network.hpp"
#include "purodyn/parallel.hpp"

namespace purodyn {

namespace {

// ---------------------------------------------------------------------------
// formatting and file plumbing

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string hex_digest(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("failed to write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

struct ArtifactSink {
  std::filesystem::path dir;
  Json list = Json::array();

  void write(const std::string& name, const std::string& content) {
    const std::filesystem::path path = dir / name;
    std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, content);
    list.push_back({{"file", name},
                    {"bytes", content.size()},
                    {"fnv1a64", hex_digest(fnv1a64(content))}});
  }
};

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) body_ << ',';
      body_ << header[i];
    }
    body_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) body_ << ',';
      body_ << fmt17(values[i]);
    }
    body_ << '\n';
  }

  std::string str() const { return body_.str(); }

 private:
  std::ostringstream body_;
};

// ---------------------------------------------------------------------------
// JSON codecs

Json vector_to_json(const RealVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

RealVector vector_from_json(const Json& j) {
  RealVector v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const Json& x : j) v[i++] = x.get<double>();
  return v;
}

Json envelope_to_json(const EnvelopeSpec& e) {
  return std::visit(
      [](const auto& spec) -> Json {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ExponentialEnvelope>) {
          return {{"variant", "exponential"}, {"alpha", spec.alpha}};
        } else if constexpr (std::is_same_v<T, GaussianTrainEnvelope>) {
          Json pulses = Json::array();
          for (const GaussianPulse& p : spec.pulses) {
            pulses.push_back({{"t", p.center}, {"a", p.amplitude}, {"b", p.width}});
          }
          return {{"variant", "gaussian_train"}, {"pulses", pulses}};
        } else if constexpr (std::is_same_v<T, SinSquaredEnvelope>) {
          return {{"variant", "sin_squared"}};
        } else {
          return {{"variant", "constant"}, {"value", spec.value}};
        }
      },
      e);
}

EnvelopeSpec envelope_from_json(const Json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "exponential") {
    return ExponentialEnvelope{j.at("alpha").get<double>()};
  }
  if (variant == "gaussian_train") {
    GaussianTrainEnvelope train;
    for (const Json& p : j.at("pulses")) {
      train.pulses.push_back(
          {p.at("t").get<double>(), p.at("a").get<double>(), p.at("b").get<double>()});
    }
    return train;
  }
  if (variant == "sin_squared") return SinSquaredEnvelope{};
  if (variant == "constant") return ConstantEnvelope{j.at("value").get<double>()};
  throw ConfigInvalid("unknown envelope variant: " + variant);
}

OptimizerConfig optimizer_from_json(const Json& j) {
  OptimizerConfig cfg;
  if (j.contains("max_iterations")) cfg.max_iterations = j.at("max_iterations").get<int>();
  if (j.contains("gradient_tolerance"))
    cfg.gradient_tolerance = j.at("gradient_tolerance").get<double>();
  if (j.contains("fd_step")) cfg.fd_step = j.at("fd_step").get<double>();
  if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("memory")) cfg.memory = j.at("memory").get<int>();
  return cfg;
}

Json optimizer_to_json(const OptimizerConfig& cfg) {
  return {{"max_iterations", cfg.max_iterations},
          {"gradient_tolerance", cfg.gradient_tolerance},
          {"fd_step", cfg.fd_step},
          {"restarts", cfg.restarts},
          {"seed", cfg.seed},
          {"memory", cfg.memory}};
}

Json fit_to_json(const FitResult& fit) {
  return {{"best_value", fit.best_value},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"best_params", vector_to_json(fit.best_params)},
          {"value_history", fit.value_history}};
}

struct GridSpec {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
};

GridSpec grid_from_json(const Json& j) {
  return {j.at("t_start").get<double>(), j.at("t_end").get<double>(),
          j.at("dt").get<double>()};
}

std::vector<double> make_grid(const GridSpec& g) {
  const double span = g.t_end - g.t_start;
  const long steps = std::lround(span / g.dt);
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) {
    grid[static_cast<std::size_t>(k)] = g.t_start + static_cast<double>(k) * g.dt;
  }
  grid.back() = g.t_end;
  return grid;
}

// ---------------------------------------------------------------------------
// envelope parameter packing for the fits

int envelope_free_count(const EnvelopeSpec& e) {
  if (std::holds_alternative<ExponentialEnvelope>(e)) return 1;
  if (const auto* train = std::get_if<GaussianTrainEnvelope>(&e)) {
    return 3 * static_cast<int>(train->pulses.size());
  }
  return 0;
}

void envelope_initial(const EnvelopeSpec& e, std::vector<double>& out) {
  if (const auto* exp = std::get_if<ExponentialEnvelope>(&e)) {
    out.push_back(exp->alpha);
  } else if (const auto* train = std::get_if<GaussianTrainEnvelope>(&e)) {
    for (const GaussianPulse& p : train->pulses) {
      out.push_back(p.center);
      out.push_back(p.amplitude);
      out.push_back(p.width);
    }
  }
}

EnvelopeSpec envelope_unpack(const EnvelopeSpec& proto, const double* p) {
  if (std::holds_alternative<ExponentialEnvelope>(proto)) {
    return ExponentialEnvelope{p[0]};
  }
  if (const auto* train = std::get_if<GaussianTrainEnvelope>(&proto)) {
    GaussianTrainEnvelope out;
    for (std::size_t i = 0; i < train->pulses.size(); ++i) {
      out.pulses.push_back({p[3 * i], p[3 * i + 1], p[3 * i + 2]});
    }
    return out;
  }
  return proto;
}

void envelope_bounds(const EnvelopeSpec& proto, double t_lo, double t_hi,
                     std::vector<std::pair<double, double>>& out) {
  if (std::holds_alternative<ExponentialEnvelope>(proto)) {
    out.emplace_back(0.0, 20.0);
    return;
  }
  if (const auto* train = std::get_if<GaussianTrainEnvelope>(&proto)) {
    const double span = t_hi - t_lo;
    const double min_width = std::max(0.05, span / 400.0);
    const double max_width = std::max(min_width * 2.0, span / 5.0);
    for (std::size_t i = 0; i < train->pulses.size(); ++i) {
      out.emplace_back(t_lo, t_hi);          // center
      out.emplace_back(-60.0, 60.0);         // amplitude
      out.emplace_back(min_width, max_width);  // width
    }
  }
}

constexpr double kBaseParamBound = 10.0;

// ---------------------------------------------------------------------------
// invariant bookkeeping

Json density_invariants(const std::vector<DensityMatrix>& states) {
  double max_trace_dev = 0.0;
  double max_herm = 0.0;
  double min_eig = 1.0;
  for (const DensityMatrix& rho : states) {
    max_trace_dev = std::max(max_trace_dev, std::abs(rho.matrix().trace().real() - 1.0));
    max_herm = std::max(max_herm, hermiticity_residual(rho.matrix()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(),
                                                        Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, solver.eigenvalues().minCoeff());
  }
  return {{"max_trace_deviation", max_trace_dev},
          {"max_hermiticity_residual", max_herm},
          {"min_eigenvalue", min_eig},
          {"trace_preserved", max_trace_dev < 1e-10},
          {"positive", min_eig > -1e-8}};
}

Json purified_invariants(const PurifiedTrajectory& traj) {
  double max_norm_dev = 0.0;
  for (const PureState& psi : traj.purified_states) {
    max_norm_dev = std::max(max_norm_dev, std::abs(psi.amplitudes().norm() - 1.0));
  }
  Json inv = density_invariants(traj.reduced_states);
  inv["max_norm_deviation"] = max_norm_dev;
  inv["norm_preserved"] = max_norm_dev < 1e-10;
  return inv;
}

// ---------------------------------------------------------------------------
// shared config pieces

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

PropagationOptions options_from(const Json& config, const char* key, double fallback) {
  PropagationOptions opt;
  opt.max_step = fallback;
  if (config.contains("integration") && config.at("integration").contains(key)) {
    opt.max_step = config.at("integration").at(key).get<double>();
  }
  return opt;
}

TLSNetworkSpec network_spec_from_json(const Json& j) {
  TLSNetworkSpec spec;
  if (j.contains("energies")) {
    const Json& e = j.at("energies");
    spec.e0 = e.at("e0").get<double>();
    spec.e1 = e.at("e1").get<double>();
    spec.coupling_c = e.at("coupling").get<double>();
  }
  spec.full_hermitian_edges = j.value("full_hermitian_edges", false);
  for (const Json& edge : j.at("edges")) {
    spec.edge_envelopes.push_back(envelope_from_json(edge.at("envelope")));
    if (spec.full_hermitian_edges) {
      spec.edge_base_params.push_back(vector_from_json(edge.at("base_params")));
    } else {
      RealVector g(1);
      g[0] = edge.at("exchange_strength").get<double>();
      spec.edge_base_params.push_back(g);
    }
  }
  return spec;
}

Json network_spec_to_json(const TLSNetworkSpec& spec) {
  Json edges = Json::array();
  for (std::size_t i = 0; i < spec.edge_envelopes.size(); ++i) {
    Json edge = {{"envelope", envelope_to_json(spec.edge_envelopes[i])}};
    if (spec.full_hermitian_edges) {
      edge["base_params"] = vector_to_json(spec.edge_base_params[i]);
    } else {
      edge["exchange_strength"] = spec.edge_base_params[i][0];
    }
    edges.push_back(edge);
  }
  return {{"energies",
           {{"e0", spec.e0}, {"e1", spec.e1}, {"coupling", spec.coupling_c}}},
          {"full_hermitian_edges", spec.full_hermitian_edges},
          {"edges", edges}};
}

TotalHamiltonian network_hamiltonian(const TLSNetworkSpec& spec) {
  return TotalHamiltonian::make(
      build_system_hamiltonian(spec), build_bath_hamiltonian(spec),
      [spec](double t) { return build_edge_interactions(spec, t); });
}

// ---------------------------------------------------------------------------
// scenario: lindblad-match

Json run_lindblad_match(const Json& config, ArtifactSink& sink, int& exit_code) {
  const GridSpec grid_spec = grid_from_json(config.at("grid"));
  const std::vector<double> grid = make_grid(grid_spec);
  const DensityMatrix rho0(matrix_from_json(config.at("probe_initial_state")));
  const ComplexMatrix h_b = config.contains("bath_hamiltonian")
                                ? matrix_from_json(config.at("bath_hamiltonian"))
                                : diag2(1.0, 0.0);

  const LindbladModel model = decay_channel_model();
  const Trajectory target = integrate(model, rho0, grid);
  const PureState psi0 = purify(rho0);

  const EnvelopeSpec proto = envelope_from_json(config.at("envelope"));
  const int env_count = envelope_free_count(proto);
  const Index dim = 4;

  const ComplexMatrix h_s = model.hamiltonian;
  const auto build = [&, h_b, h_s](const RealVector& params) {
    const EnvelopeSpec env = envelope_unpack(proto, params.data());
    RealVector base = params.tail(dim * dim);
    return TotalHamiltonian::make(h_s, h_b, InteractionSpec{env, base, dim});
  };

  PropagationProblem problem{build, psi0, grid,
                             options_from(config, "fit_max_step", grid_spec.dt)};

  OptimizerConfig cfg = optimizer_from_json(config.value("optimizer", Json::object()));
  std::vector<std::pair<double, double>> bounds;
  envelope_bounds(proto, grid_spec.t_start, grid_spec.t_end, bounds);
  for (Index i = 0; i < dim * dim; ++i) bounds.emplace_back(-kBaseParamBound, kBaseParamBound);
  cfg.bounds = bounds;

  std::vector<double> x0v;
  envelope_initial(proto, x0v);
  x0v.resize(static_cast<std::size_t>(env_count + dim * dim), 0.0);
  RealVector x0 = Eigen::Map<RealVector>(x0v.data(), static_cast<Index>(x0v.size()));
  if (config.contains("initial_params")) {
    x0 = vector_from_json(config.at("initial_params"));
  }

  const std::string objective_kind = config.value("objective", "trajectory");
  FitResult fit;
  if (objective_kind == "dissipator") {
    std::vector<DensityMatrix> probes;
    for (const Json& p : config.at("dissipator_probes")) {
      probes.emplace_back(matrix_from_json(p));
    }
    OptimizerConfig dcfg = cfg;
    std::vector<std::pair<double, double>> dbounds(
        static_cast<std::size_t>(dim * dim), {-kBaseParamBound, kBaseParamBound});
    dcfg.bounds = dbounds;
    fit = optimize(
        [&](const RealVector& p) { return objective_dissipator_match(p, model, probes); },
        x0.tail(dim * dim), dcfg);
    RealVector full(env_count + dim * dim);
    envelope_initial(proto, x0v);
    for (int i = 0; i < env_count; ++i) full[i] = x0v[static_cast<std::size_t>(i)];
    full.tail(dim * dim) = fit.best_params;
    fit.best_params = full;
  } else {
    fit = optimize(
        [&](const RealVector& p) { return objective_trajectory(p, target, problem); }, x0,
        cfg);
  }

  // Re-evaluate the fitted interaction on the fine integration step.
  PropagationProblem fine = problem;
  fine.options = options_from(config, "final_max_step", 0.01);
  const double achieved = objective_trajectory(fit.best_params, target, fine);
  const PurifiedTrajectory traj =
      propagate(build(fit.best_params), psi0, grid, fine.options);

  Csv csv({"t", "rho00_lind", "rho11_lind", "rho00_pur", "rho11_pur", "residual"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ComplexMatrix& lind = target.states[k].matrix();
    const ComplexMatrix& pur = traj.reduced_states[k].matrix();
    csv.row({grid[k], lind(0, 0).real(), lind(1, 1).real(), pur(0, 0).real(),
             pur(1, 1).real(), (pur - lind).norm()});
  }
  sink.write("trajectory.csv", csv.str());

  const EnvelopeSpec fitted_env = envelope_unpack(proto, fit.best_params.data());
  Json fit_doc = fit_to_json(fit);
  fit_doc["objective"] = objective_kind;
  fit_doc["trajectory_objective"] = achieved;
  fit_doc["envelope"] = envelope_to_json(fitted_env);
  fit_doc["interaction_base_params"] = vector_to_json(fit.best_params.tail(dim * dim));
  fit_doc["probe_initial_state"] = matrix_to_json(rho0.matrix());
  fit_doc["bath_hamiltonian"] = matrix_to_json(h_b);
  sink.write("fit.json", fit_doc.dump(2) + "\n");

  const double threshold = config.value("objective_threshold", 1e-3);
  if (!(achieved <= threshold)) exit_code = 3;

  Json summary;
  summary["achieved"] = {{"trajectory_objective", achieved},
                         {"objective_threshold", threshold},
                         {"fit_value", fit.best_value}};
  summary["fitted_parameters"] = vector_to_json(fit.best_params);
  Json inv = purified_invariants(traj);
  inv["lindblad_reference"] = density_invariants(target.states);
  summary["invariants"] = inv;
  return summary;
}

// ---------------------------------------------------------------------------
// scenario: noncp-disc

Json run_noncp_disc(const Json& config, ArtifactSink& sink, int& exit_code) {
  const int n = config.value("samples", 200);
  const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
  const int shells = config.value("interior_shells", 0);
  const std::vector<BlochVector> points = sample_bloch_sphere(n, seed, shells);
  const PauliDiagonalMap disc = noncp_disc_map();

  struct Row {
    BlochVector in, out;
    double unitarity = 0.0;
  };
  std::vector<Row> rows(points.size());
  parallel_for_index(static_cast<int>(points.size()), [&](int i) {
    const BlochVector& p = points[static_cast<std::size_t>(i)];
    const DensityMatrix rho = bloch_to_density(p);
    const DensityMatrix target = apply_pauli_map(disc, rho);
    const ComplexMatrix u = build_transfer_unitary(rho, target);
    const ComplexVector mapped = u * purify(rho).amplitudes();
    const DensityMatrix reduced = reduced_system_state(PureState(mapped), 2, 2);
    rows[static_cast<std::size_t>(i)] = {
        p, density_to_bloch(reduced), (u.adjoint() * u - identity(4)).norm()};
  });

  Csv csv({"x", "y", "z", "xp", "yp", "zp", "unitarity"});
  double max_unitarity = 0.0, max_dz = 0.0, max_dx = 0.0, max_dy = 0.0;
  for (const Row& r : rows) {
    csv.row({r.in.x, r.in.y, r.in.z, r.out.x, r.out.y, r.out.z, r.unitarity});
    max_unitarity = std::max(max_unitarity, r.unitarity);
    max_dz = std::max(max_dz, std::abs(r.out.z));
    max_dx = std::max(max_dx, std::abs(r.out.x - r.in.x));
    max_dy = std::max(max_dy, std::abs(r.out.y - r.in.y));
  }
  sink.write("samples.csv", csv.str());

  // Choi certification: the disc map fails CP, the halved disc map passes,
  // and any epsilon above it fails again.
  const ChoiMatrix disc_choi = choi(disc);
  const RealVector disc_eigs = hermitian_eig(disc_choi.matrix).eigenvalues;
  const PauliDiagonalMap comparator = cp_disc_comparator();
  constexpr double eps = 1e-6;
  const bool comparator_cp = is_cp(comparator);
  const bool comparator_boundary =
      !is_cp({comparator.lambda1 + eps, comparator.lambda2 + eps, comparator.lambda3});

  Json choi_doc;
  choi_doc["disc_choi_eigenvalues"] = vector_to_json(disc_eigs);
  choi_doc["disc_is_cp"] = is_cp(disc);
  choi_doc["comparator"] = {{"lambda1", comparator.lambda1},
                            {"lambda2", comparator.lambda2},
                            {"lambda3", comparator.lambda3},
                            {"is_cp", comparator_cp},
                            {"epsilon_above_fails", comparator_boundary}};
  sink.write("choi.json", choi_doc.dump(2) + "\n");

  const bool ok = max_unitarity < 1e-12 && max_dz < 1e-10 && max_dx < 1e-10 &&
                  max_dy < 1e-10 && !is_cp(disc) && comparator_cp && comparator_boundary &&
                  std::abs(disc_eigs.minCoeff() + 0.5) < 1e-10;
  if (!ok) exit_code = 2;

  Json summary;
  summary["achieved"] = {{"samples", points.size()},
                         {"max_unitarity_residual", max_unitarity},
                         {"max_abs_zp", max_dz},
                         {"max_abs_dx", max_dx},
                         {"max_abs_dy", max_dy},
                         {"disc_choi_min_eigenvalue", disc_eigs.minCoeff()}};
  summary["invariants"] = {{"transfer_unitaries_unitary", max_unitarity < 1e-12},
                           {"disc_action_reproduced", max_dz < 1e-10},
                           {"disc_not_cp", !is_cp(disc)},
                           {"comparator_cp", comparator_cp}};
  return summary;
}

// ---------------------------------------------------------------------------
// scenario: tls-decay

Json run_tls_decay(const Json& config, ArtifactSink& sink, int& exit_code) {
  const GridSpec grid_spec = grid_from_json(config.at("grid"));
  const std::vector<double> grid = make_grid(grid_spec);
  const double t_c = config.value("t_c", grid_spec.t_end);

  const ComplexMatrix h_s = config.contains("system_hamiltonian")
                                ? matrix_from_json(config.at("system_hamiltonian"))
                                : diag2(0.0, 1.0);
  const ComplexMatrix h_b = config.contains("bath_hamiltonian")
                                ? matrix_from_json(config.at("bath_hamiltonian"))
                                : h_s;

  // System excited, effective bath in its ground state.
  ComplexVector psi0v = ComplexVector::Zero(4);
  psi0v[2] = 1.0;  // |1> (x) |0>
  const PureState psi0{psi0v};
  const DensityMatrix rho_target(diag2(1.0, 0.0));

  const EnvelopeSpec proto = envelope_from_json(config.at("envelope"));
  const int env_count = envelope_free_count(proto);
  const Index dim = 4;

  const auto build = [&, h_s, h_b](const RealVector& params) {
    const EnvelopeSpec env = envelope_unpack(proto, params.data());
    RealVector base = params.tail(dim * dim);
    return TotalHamiltonian::make(h_s, h_b, InteractionSpec{env, base, dim});
  };

  // The fit only needs the state at t_c; internal substepping keeps accuracy.
  PropagationProblem problem{build,
                             psi0,
                             {grid_spec.t_start, t_c},
                             options_from(config, "fit_max_step", 0.01)};

  OptimizerConfig cfg = optimizer_from_json(config.value("optimizer", Json::object()));
  std::vector<std::pair<double, double>> bounds;
  envelope_bounds(proto, grid_spec.t_start, grid_spec.t_end, bounds);
  for (Index i = 0; i < dim * dim; ++i) bounds.emplace_back(-kBaseParamBound, kBaseParamBound);
  cfg.bounds = bounds;

  std::vector<double> x0v;
  envelope_initial(proto, x0v);
  x0v.resize(static_cast<std::size_t>(env_count + dim * dim), 0.0);
  RealVector x0 = Eigen::Map<RealVector>(x0v.data(), static_cast<Index>(x0v.size()));
  if (config.contains("initial_params")) x0 = vector_from_json(config.at("initial_params"));

  const FitResult fit = optimize(
      [&](const RealVector& p) { return objective_terminal(p, rho_target, t_c, problem); },
      x0, cfg);

  const PropagationOptions fine = options_from(config, "final_max_step", 0.01);
  const PurifiedTrajectory traj = propagate(build(fit.best_params), psi0, grid, fine);
  const EnvelopeSpec fitted_env = envelope_unpack(proto, fit.best_params.data());

  Csv csv({"t", "rho00", "rho11", "envelope"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ComplexMatrix& rho = traj.reduced_states[k].matrix();
    csv.row({grid[k], rho(0, 0).real(), rho(1, 1).real(),
             eval_envelope(fitted_env, grid[k])});
  }
  sink.write("trajectory.csv", csv.str());

  std::size_t tc_index = grid.size() - 1;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid[k] - t_c) < 1e-9) tc_index = k;
  }
  const double ground_population =
      traj.reduced_states[tc_index].matrix()(0, 0).real();

  Json fit_doc = fit_to_json(fit);
  fit_doc["envelope"] = envelope_to_json(fitted_env);
  fit_doc["interaction_base_params"] = vector_to_json(fit.best_params.tail(dim * dim));
  fit_doc["ground_population_at_t_c"] = ground_population;
  fit_doc["t_c"] = t_c;
  sink.write("fit.json", fit_doc.dump(2) + "\n");

  const double threshold = config.value("population_threshold", 0.99);
  if (!(ground_population >= threshold)) exit_code = 3;

  Json summary;
  summary["achieved"] = {{"ground_population_at_t_c", ground_population},
                         {"population_threshold", threshold},
                         {"terminal_objective", fit.best_value}};
  summary["fitted_parameters"] = vector_to_json(fit.best_params);
  summary["invariants"] = purified_invariants(traj);
  return summary;
}

// ---------------------------------------------------------------------------
// scenario: tls-network

// Piecewise-linear target for the summed system excited population.
double profile_value(const std::vector<std::pair<double, double>>& knots, double t) {
  if (t <= knots.front().first) return knots.front().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (t <= knots[i].first) {
      const auto& [t0, v0] = knots[i - 1];
      const auto& [t1, v1] = knots[i];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  return knots.back().second;
}

Json run_tls_network(const Json& config, ArtifactSink& sink, int& exit_code) {
  const GridSpec grid_spec = grid_from_json(config.at("grid"));
  const std::vector<double> grid = make_grid(grid_spec);
  const TLSNetworkSpec proto_spec = network_spec_from_json(config);

  ComplexVector psi0v = ComplexVector::Zero(16);
  {
    const std::string basis = config.value("initial_basis_state", "1000");
    Index idx = 0;
    for (char c : basis) idx = idx * 2 + (c == '1' ? 1 : 0);
    psi0v[idx] = 1.0;
  }
  const PureState psi0{psi0v};

  std::vector<std::pair<double, double>> knots;
  for (const Json& k : config.at("target_profile")) {
    knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
  }

  const double sample_dt = config.value("objective_sample_dt", 2.0);
  std::vector<double> sample_grid;
  for (double t = grid_spec.t_start; t <= grid_spec.t_end + 1e-9; t += sample_dt) {
    sample_grid.push_back(std::min(t, grid_spec.t_end));
  }

  // Parameter layout per edge: pulse (t, a, b) triplets, then the exchange
  // strength. Both edges concatenated.
  const auto spec_from_params = [&](const RealVector& params) {
    TLSNetworkSpec spec = proto_spec;
    Index p = 0;
    for (std::size_t edge = 0; edge < 2; ++edge) {
      const int count = envelope_free_count(proto_spec.edge_envelopes[edge]);
      spec.edge_envelopes[edge] =
          envelope_unpack(proto_spec.edge_envelopes[edge], params.data() + p);
      p += count;
      spec.edge_base_params[edge] = params.segment(p, proto_spec.edge_base_params[edge].size());
      p += proto_spec.edge_base_params[edge].size();
    }
    return spec;
  };

  const PropagationOptions fit_options = options_from(config, "fit_max_step", 0.4);
  const std::vector<Index> system_layout = {2, 2};

  const auto system_population = [&](const DensityMatrix& reduced) {
    return excited_population(reduced, 0, system_layout) +
           excited_population(reduced, 1, system_layout);
  };

  const Objective objective = [&](const RealVector& params) {
    const TLSNetworkSpec spec = spec_from_params(params);
    const PurifiedTrajectory traj =
        propagate(network_hamiltonian(spec), psi0, sample_grid, fit_options);
    double sum = 0.0;
    for (std::size_t k = 0; k < sample_grid.size(); ++k) {
      const double diff =
          system_population(traj.reduced_states[k]) - profile_value(knots, sample_grid[k]);
      sum += diff * diff;
    }
    return sum / static_cast<double>(sample_grid.size());
  };

  OptimizerConfig cfg = optimizer_from_json(config.value("optimizer", Json::object()));
  std::vector<std::pair<double, double>> bounds;
  std::vector<double> x0v;
  for (std::size_t edge = 0; edge < 2; ++edge) {
    envelope_bounds(proto_spec.edge_envelopes[edge], grid_spec.t_start, grid_spec.t_end,
                    bounds);
    envelope_initial(proto_spec.edge_envelopes[edge], x0v);
    for (Index i = 0; i < proto_spec.edge_base_params[edge].size(); ++i) {
      bounds.emplace_back(-2.0, 2.0);
      x0v.push_back(proto_spec.edge_base_params[edge][i]);
    }
  }
  cfg.bounds = bounds;
  RealVector x0 = Eigen::Map<RealVector>(x0v.data(), static_cast<Index>(x0v.size()));
  if (config.contains("initial_params")) x0 = vector_from_json(config.at("initial_params"));

  const FitResult fit = optimize(objective, x0, cfg);
  const TLSNetworkSpec fitted = spec_from_params(fit.best_params);

  const PropagationOptions fine = options_from(config, "final_max_step", grid_spec.dt);
  const PurifiedTrajectory traj = propagate(network_hamiltonian(fitted), psi0, grid, fine);

  PopulationSeries series;
  series.times = grid;
  series.labels = {"S1", "S2", "B1", "B2"};
  series.populations.assign(4, std::vector<double>(grid.size(), 0.0));
  Csv csv({"t", "pop_S1", "pop_S2", "pop_B1", "pop_B2", "gamma1", "gamma2"});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const DensityMatrix& sys = traj.reduced_states[k];
    const ComplexMatrix bath_m =
        partial_trace(traj.purified_states[k].outer(), 4, 4, Subsystem::B);
    const DensityMatrix bath(Complex(0.5, 0.0) * (bath_m + bath_m.adjoint()));
    series.populations[0][k] = excited_population(sys, 0, system_layout);
    series.populations[1][k] = excited_population(sys, 1, system_layout);
    series.populations[2][k] = excited_population(bath, 0, system_layout);
    series.populations[3][k] = excited_population(bath, 1, system_layout);
    csv.row({grid[k], series.populations[0][k], series.populations[1][k],
             series.populations[2][k], series.populations[3][k],
             eval_envelope(fitted.edge_envelopes[0], grid[k]),
             eval_envelope(fitted.edge_envelopes[1], grid[k])});
  }
  sink.write("populations.csv", csv.str());

  const Json backflow_cfg = config.value("backflow", Json::object());
  const double window_au = backflow_cfg.value("window_au", 10.0);
  const double threshold = backflow_cfg.value("threshold", 1e-4);
  const int window = std::max(1, static_cast<int>(std::lround(window_au / grid_spec.dt)));
  const std::vector<BackflowInterval> system_backflow =
      detect_backflow(series, {0, 1}, window, threshold);
  const std::vector<BackflowInterval> bath_backflow =
      detect_backflow(series, {2, 3}, window, threshold);

  Json backflow_doc;
  backflow_doc["window_au"] = window_au;
  backflow_doc["threshold"] = threshold;
  backflow_doc["system_intervals"] = Json::array();
  for (const BackflowInterval& iv : system_backflow) {
    backflow_doc["system_intervals"].push_back({iv.t_start, iv.t_end});
  }
  backflow_doc["bath_intervals"] = Json::array();
  for (const BackflowInterval& iv : bath_backflow) {
    backflow_doc["bath_intervals"].push_back({iv.t_start, iv.t_end});
  }
  sink.write("backflow.json", backflow_doc.dump(2) + "\n");

  Json fit_doc = fit_to_json(fit);
  fit_doc["network"] = network_spec_to_json(fitted);
  sink.write("fit.json", fit_doc.dump(2) + "\n");

  const double initial_pop = series.populations[0][0] + series.populations[1][0];
  const double terminal_pop =
      series.populations[0].back() + series.populations[1].back();
  const double terminal_ratio = terminal_pop / initial_pop;

  // Total excitation is conserved by the exchange-coupled configuration.
  double max_excitation_drift = 0.0;
  const double total0 = series.populations[0][0] + series.populations[1][0] +
                        series.populations[2][0] + series.populations[3][0];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double total = 0.0;
    for (int node = 0; node < 4; ++node) total += series.populations[node][k];
    max_excitation_drift = std::max(max_excitation_drift, std::abs(total - total0));
  }

  const double terminal_threshold = config.value("terminal_threshold", 0.2);
  if (!(terminal_ratio <= terminal_threshold) || system_backflow.empty()) exit_code = 3;

  Json summary;
  summary["achieved"] = {{"profile_objective", fit.best_value},
                         {"terminal_system_population", terminal_pop},
                         {"terminal_ratio", terminal_ratio},
                         {"terminal_threshold", terminal_threshold},
                         {"system_backflow_intervals", system_backflow.size()},
                         {"bath_backflow_intervals", bath_backflow.size()}};
  summary["fitted_parameters"] = vector_to_json(fit.best_params);
  Json inv = purified_invariants(traj);
  inv["max_excitation_drift"] = max_excitation_drift;
  inv["excitation_conserved"] = max_excitation_drift < 1e-8;
  summary["invariants"] = inv;
  return summary;
}

// ---------------------------------------------------------------------------
// scenario: compile-circuit

Json run_compile_circuit(const Json& config, ArtifactSink& sink, int& exit_code) {
  const double interval = config.value("interval", 4.04);
  const int steps = config.value("steps", 99);
  const TLSNetworkSpec spec = network_spec_from_json(config.at("network"));
  const TotalHamiltonian ht = network_hamiltonian(spec);
  const PropagationOptions options = options_from(config, "max_step", 0.04);

  const CircuitAnsatz ansatz = default_ansatz();
  OptimizerConfig cfg = optimizer_from_json(config.value("optimizer", Json::object()));

  const CompiledSchedule schedule =
      compile_schedule(ht, interval, steps, ansatz, cfg, options);

  Json manifest;
  manifest["interval"] = interval;
  manifest["steps"] = Json::array();
  manifest["optimizer"] = optimizer_to_json(cfg);
  double min_fidelity = 1.0, mean_fidelity = 0.0;
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    const CompiledStep& step = schedule.steps[k];
    char name[64];
    std::snprintf(name, sizeof(name), "circuits/step_%03zu.qasm", k);
    sink.write(name, emit_circuit_text(ansatz, step.params));
    manifest["steps"].push_back({{"index", k},
                                 {"t_start", interval * static_cast<double>(k)},
                                 {"target_hash", hex_digest(step.target_hash)},
                                 {"fidelity", step.fidelity},
                                 {"circuit", name},
                                 {"params", vector_to_json(step.params)}});
    min_fidelity = std::min(min_fidelity, step.fidelity);
    mean_fidelity += step.fidelity;
  }
  mean_fidelity /= static_cast<double>(schedule.steps.size());
  sink.write("schedule_manifest.json", manifest.dump(2) + "\n");

  // Playback: apply the compiled circuits sequentially and compare the
  // reduced system populations against the exact propagation.
  ComplexVector psi0v = ComplexVector::Zero(16);
  psi0v[8] = 1.0;  // S1 excited
  const PureState psi0{psi0v};
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) grid[static_cast<std::size_t>(k)] = interval * k;
  const PurifiedTrajectory exact = propagate(ht, psi0, grid, options);

  const std::vector<Index> layout = {2, 2};
  Csv playback({"t", "pop_S1_exact", "pop_S2_exact", "pop_S1_compiled", "pop_S2_compiled",
                "step_fidelity", "state_deviation"});
  ComplexVector psi = psi0.amplitudes();
  double max_norm_dev = 0.0;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(steps); ++k) {
    const DensityMatrix compiled_sys = reduced_system_state(PureState(psi), 4, 4);
    const DensityMatrix& exact_sys = exact.reduced_states[k];
    playback.row({grid[k], excited_population(exact_sys, 0, layout),
                  excited_population(exact_sys, 1, layout),
                  excited_population(compiled_sys, 0, layout),
                  excited_population(compiled_sys, 1, layout),
                  k == 0 ? 1.0 : schedule.steps[k - 1].fidelity,
                  (compiled_sys.matrix() - exact_sys.matrix()).norm()});
    max_norm_dev = std::max(max_norm_dev, std::abs(psi.norm() - 1.0));
    if (k < static_cast<std::size_t>(steps)) {
      psi = ansatz_unitary(ansatz, schedule.steps[k].params) * psi;
    }
  }
  sink.write("playback.csv", playback.str());

  (void)exit_code;  // compilation is explicitly approximate; fidelity is reported
  Json summary;
  summary["achieved"] = {{"steps", steps},
                         {"interval", interval},
                         {"min_fidelity", min_fidelity},
                         {"mean_fidelity", mean_fidelity}};
  summary["invariants"] = {{"playback_max_norm_deviation", max_norm_dev},
                           {"norm_preserved", max_norm_dev < 1e-10}};
  return summary;
}

// ---------------------------------------------------------------------------
// validation

void validate_matrix(const Json& config, const std::string& path, Index dim,
                     bool density, std::vector<std::string>& out) {
  try {
    const ComplexMatrix m = matrix_from_json(config);
    if (dim > 0 && (m.rows() != dim || m.cols() != dim)) {
      out.push_back(path + ": expected a " + std::to_string(dim) + "x" +
                    std::to_string(dim) + " matrix");
      return;
    }
    if (density) {
      DensityMatrix check(m);
    } else if (!is_hermitian(m)) {
      out.push_back(path + ": matrix is not Hermitian");
    }
  } catch (const std::exception& e) {
    out.push_back(path + ": " + e.what());
  }
}

void validate_envelope(const Json& j, const std::string& path,
                       std::vector<std::string>& out) {
  if (!j.contains("variant")) {
    out.push_back(path + ".variant: missing");
    return;
  }
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "exponential") {
    if (!j.contains("alpha")) {
      out.push_back(path + ".alpha: missing");
    } else if (j.at("alpha").get<double>() < 0.0) {
      out.push_back(path + ".alpha: must be >= 0");
    }
  } else if (variant == "gaussian_train") {
    if (!j.contains("pulses") || !j.at("pulses").is_array() || j.at("pulses").empty()) {
      out.push_back(path + ".pulses: must be a non-empty array");
      return;
    }
    int i = 0;
    for (const Json& p : j.at("pulses")) {
      const std::string ppath = path + ".pulses[" + std::to_string(i) + "]";
      if (!p.contains("t") || !p.contains("a") || !p.contains("b")) {
        out.push_back(ppath + ": needs fields t, a, b");
      } else {
        if (!(p.at("b").get<double>() > 0.0)) out.push_back(ppath + ".b: width must be positive");
        if (!std::isfinite(p.at("t").get<double>())) out.push_back(ppath + ".t: must be finite");
      }
      ++i;
    }
  } else if (variant != "sin_squared" && variant != "constant") {
    out.push_back(path + ".variant: unknown variant '" + variant + "'");
  } else if (variant == "constant" && !j.contains("value")) {
    out.push_back(path + ".value: missing");
  }
}

void validate_grid(const Json& config, double max_dt, std::vector<std::string>& out) {
  if (!config.contains("grid")) {
    out.push_back("grid: missing");
    return;
  }
  const Json& g = config.at("grid");
  for (const char* key : {"t_start", "t_end", "dt"}) {
    if (!g.contains(key)) out.push_back(std::string("grid.") + key + ": missing");
  }
  if (g.contains("t_start") && g.contains("t_end") && g.contains("dt")) {
    const GridSpec spec = grid_from_json(g);
    if (!(spec.dt > 0.0)) out.push_back("grid.dt: must be positive");
    if (!(spec.t_end > spec.t_start)) out.push_back("grid.t_end: must exceed t_start");
    if (max_dt > 0.0 && spec.dt > max_dt) {
      out.push_back("grid.dt: exceeds the " + fmt17(max_dt) + " a.u. limit");
    }
    if (spec.dt > 0.0) {
      const double steps = (spec.t_end - spec.t_start) / spec.dt;
      if (std::abs(steps - std::lround(steps)) > 1e-6) {
        out.push_back("grid.dt: must divide the time span evenly");
      }
    }
  }
}

void validate_optimizer(const Json& config, std::vector<std::string>& out) {
  if (!config.contains("optimizer")) return;
  const Json& o = config.at("optimizer");
  if (o.contains("fd_step") && !(o.at("fd_step").get<double>() > 0.0)) {
    out.push_back("optimizer.fd_step: must be positive");
  }
  if (o.contains("restarts") && o.at("restarts").get<int>() < 1) {
    out.push_back("optimizer.restarts: must be >= 1");
  }
  if (o.contains("max_iterations") && o.at("max_iterations").get<int>() < 0) {
    out.push_back("optimizer.max_iterations: must be >= 0");
  }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return {{"real", re}, {"imag", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.contains("real") || !j.contains("imag")) {
    throw ConfigInvalid("matrix needs 'real' and 'imag' arrays");
  }
  const Json& re = j.at("real");
  const Json& im = j.at("imag");
  const Index rows = static_cast<Index>(re.size());
  if (rows == 0 || im.size() != re.size()) {
    throw ConfigInvalid("matrix real/imag arrays must have matching non-zero size");
  }
  const Index cols = static_cast<Index>(re.at(0).size());
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& re_row = re.at(static_cast<std::size_t>(i));
    const Json& im_row = im.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(re_row.size()) != cols ||
        static_cast<Index>(im_row.size()) != cols) {
      throw ConfigInvalid("matrix rows have inconsistent lengths");
    }
    for (Index k = 0; k < cols; ++k) {
      m(i, k) = Complex(re_row.at(static_cast<std::size_t>(k)).get<double>(),
                        im_row.at(static_cast<std::size_t>(k)).get<double>());
    }
  }
  return m;
}

std::vector<std::string> scenario_names() {
  return {"lindblad-match", "noncp-disc", "tls-decay", "tls-network", "compile-circuit"};
}

Json default_config(const std::string& scenario) {
  Json config;
  config["schema_version"] = 1;
  config["scenario"] = scenario;
  if (scenario == "lindblad-match") {
    config["seed"] = 7;
    config["grid"] = {{"t_start", 0.0}, {"t_end", 50.0}, {"dt", 0.05}};
    config["probe_initial_state"] = matrix_to_json(diag2(0.7, 0.3));
    config["bath_hamiltonian"] = matrix_to_json(diag2(1.0, 0.0));
    config["envelope"] = {{"variant", "exponential"}, {"alpha", 0.2}};
    config["objective"] = "trajectory";
    config["dissipator_probes"] = Json::array(
        {matrix_to_json(0.5 * identity(2)), matrix_to_json(diag2(0.7, 0.3)),
         matrix_to_json(diag2(0.3, 0.7))});
    config["optimizer"] = {{"max_iterations", 150}, {"gradient_tolerance", 1e-9},
                           {"fd_step", 1e-6},      {"restarts", 4},
                           {"seed", 7},            {"memory", 10}};
    config["integration"] = {{"fit_max_step", 0.05}, {"final_max_step", 0.01}};
    config["objective_threshold"] = 1e-3;
  } else if (scenario == "noncp-disc") {
    config["seed"] = 5;
    config["samples"] = 200;
    config["interior_shells"] = 0;
  } else if (scenario == "tls-decay") {
    config["seed"] = 3;
    config["grid"] = {{"t_start", 0.0}, {"t_end", 20.0}, {"dt", 0.01}};
    config["t_c"] = 20.0;
    config["envelope"] = {{"variant", "exponential"}, {"alpha", 0.5}};
    config["optimizer"] = {{"max_iterations", 150}, {"gradient_tolerance", 1e-9},
                           {"fd_step", 1e-6},      {"restarts", 6},
                           {"seed", 3},            {"memory", 10}};
    config["integration"] = {{"fit_max_step", 0.01}, {"final_max_step", 0.01}};
    config["population_threshold"] = 0.99;
  } else if (scenario == "tls-network") {
    config["seed"] = 11;
    config["grid"] = {{"t_start", 0.0}, {"t_end", 400.0}, {"dt", 0.04}};
    config["energies"] = {{"e0", -0.5}, {"e1", 0.5}, {"coupling", 0.2}};
    config["full_hermitian_edges"] = false;
    config["edges"] = Json::array(
        {Json{{"envelope",
               {{"variant", "gaussian_train"},
                {"pulses", Json::array({Json{{"t", 60.0}, {"a", 4.0}, {"b", 12.0}},
                                        Json{{"t", 240.0}, {"a", 4.0}, {"b", 12.0}},
                                        Json{{"t", 340.0}, {"a", 4.0}, {"b", 12.0}}})}}},
              {"exchange_strength", 0.3}},
         Json{{"envelope",
               {{"variant", "gaussian_train"},
                {"pulses", Json::array({Json{{"t", 120.0}, {"a", 4.0}, {"b", 12.0}},
                                        Json{{"t", 225.0}, {"a", 6.0}, {"b", 10.0}},
                                        Json{{"t", 300.0}, {"a", 4.0}, {"b", 12.0}}})}}},
              {"exchange_strength", 0.3}}});
    config["initial_basis_state"] = "1000";
    config["target_profile"] = Json::array(
        {Json::array({0.0, 1.0}), Json::array({50.0, 0.88}), Json::array({100.0, 0.70}),
         Json::array({150.0, 0.56}), Json::array({200.0, 0.50}), Json::array({212.0, 0.50}),
         Json::array({225.0, 0.62}), Json::array({240.0, 0.56}), Json::array({280.0, 0.40}),
         Json::array({300.0, 0.33}), Json::array({320.0, 0.27}), Json::array({360.0, 0.17}),
         Json::array({400.0, 0.10})});
    config["objective_sample_dt"] = 2.0;
    config["optimizer"] = {{"max_iterations", 120}, {"gradient_tolerance", 1e-9},
                           {"fd_step", 1e-6},      {"restarts", 1},
                           {"seed", 11},           {"memory", 10}};
    config["integration"] = {{"fit_max_step", 0.4}, {"final_max_step", 0.04}};
    config["backflow"] = {{"window_au", 10.0}, {"threshold", 1e-4}};
    config["terminal_threshold"] = 0.2;
  } else if (scenario == "compile-circuit") {
    config["seed"] = 13;
    config["interval"] = 4.04;
    config["steps"] = 99;
    config["network"] = default_config("tls-network");
    config["network"].erase("scenario");
    config["network"].erase("schema_version");
    config["optimizer"] = {{"max_iterations", 250}, {"gradient_tolerance", 1e-10},
                           {"fd_step", 1e-6},      {"restarts", 6},
                           {"seed", 13},           {"memory", 10}};
    config["integration"] = {{"max_step", 0.04}};
  } else {
    throw ConfigInvalid("unknown scenario: " + scenario);
  }
  return config;
}

std::vector<std::string> validate_config(const Json& config) {
  std::vector<std::string> out;
  if (!config.contains("schema_version")) {
    out.push_back("schema_version: missing");
  } else if (config.at("schema_version").get<int>() != 1) {
    out.push_back("schema_version: unsupported version");
  }
  if (!config.contains("scenario")) {
    out.push_back("scenario: missing");
    return out;
  }
  const std::string scenario = config.at("scenario").get<std::string>();
  const std::vector<std::string> names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end()) {
    out.push_back("scenario: unknown scenario '" + scenario + "'");
    return out;
  }
  if (!config.contains("seed")) out.push_back("seed: missing");
  validate_optimizer(config, out);

  if (scenario == "lindblad-match") {
    validate_grid(config, 0.1, out);
    if (config.contains("probe_initial_state")) {
      validate_matrix(config.at("probe_initial_state"), "probe_initial_state", 2, true, out);
    } else {
      out.push_back("probe_initial_state: missing");
    }
    if (config.contains("bath_hamiltonian")) {
      validate_matrix(config.at("bath_hamiltonian"), "bath_hamiltonian", 2, false, out);
    }
    if (config.contains("envelope")) {
      validate_envelope(config.at("envelope"), "envelope", out);
    } else {
      out.push_back("envelope: missing");
    }
    const std::string objective = config.value("objective", "trajectory");
    if (objective != "trajectory" && objective != "dissipator") {
      out.push_back("objective: must be 'trajectory' or 'dissipator'");
    }
    if (objective == "dissipator") {
      if (!config.contains("dissipator_probes") || config.at("dissipator_probes").empty()) {
        out.push_back("dissipator_probes: missing or empty");
      } else {
        int i = 0;
        for (const Json& p : config.at("dissipator_probes")) {
          validate_matrix(p, "dissipator_probes[" + std::to_string(i) + "]", 2, true, out);
          ++i;
        }
      }
    }
  } else if (scenario == "noncp-disc") {
    if (config.contains("samples") && config.at("samples").get<int>() < 1) {
      out.push_back("samples: must be >= 1");
    }
    if (config.contains("interior_shells") && config.at("interior_shells").get<int>() < 0) {
      out.push_back("interior_shells: must be >= 0");
    }
  } else if (scenario == "tls-decay") {
    validate_grid(config, 0.0, out);
    if (config.contains("envelope")) {
      validate_envelope(config.at("envelope"), "envelope", out);
    } else {
      out.push_back("envelope: missing");
    }
    if (config.contains("system_hamiltonian")) {
      validate_matrix(config.at("system_hamiltonian"), "system_hamiltonian", 2, false, out);
    }
    if (config.contains("bath_hamiltonian")) {
      validate_matrix(config.at("bath_hamiltonian"), "bath_hamiltonian", 2, false, out);
    }
  } else if (scenario == "tls-network" || scenario == "compile-circuit") {
    const Json& net = scenario == "tls-network" ? config : config.value("network", Json::object());
    if (scenario == "tls-network") validate_grid(config, 0.0, out);
    if (!net.contains("edges") || !net.at("edges").is_array() || net.at("edges").size() != 2) {
      out.push_back("edges: exactly two system-bath edges are required");
    } else {
      int i = 0;
      for (const Json& edge : net.at("edges")) {
        const std::string path = "edges[" + std::to_string(i) + "]";
        if (!edge.contains("envelope")) {
          out.push_back(path + ".envelope: missing");
        } else {
          validate_envelope(edge.at("envelope"), path + ".envelope", out);
        }
        const bool full = net.value("full_hermitian_edges", false);
        if (full && !edge.contains("base_params")) {
          out.push_back(path + ".base_params: missing for full-Hermitian edges");
        }
        if (!full && !edge.contains("exchange_strength")) {
          out.push_back(path + ".exchange_strength: missing");
        }
        ++i;
      }
    }
    if (scenario == "tls-network" && !config.contains("target_profile")) {
      out.push_back("target_profile: missing");
    }
    if (scenario == "compile-circuit") {
      if (config.contains("interval") && !(config.at("interval").get<double>() > 0.0)) {
        out.push_back("interval: must be positive");
      }
      if (config.contains("steps") && config.at("steps").get<int>() < 1) {
        out.push_back("steps: must be >= 1");
      }
    }
  }
  return out;
}

RunSummary run_scenario(const Json& config, const std::filesystem::path& out_dir) {
  const std::vector<std::string> diagnostics = validate_config(config);
  if (!diagnostics.empty()) {
    std::string joined;
    for (const std::string& d : diagnostics) joined += d + "\n";
    throw ConfigInvalid(joined);
  }

  const std::string scenario = config.at("scenario").get<std::string>();
  std::filesystem::create_directories(out_dir);
  ArtifactSink sink{out_dir};

  RunSummary result;
  result.scenario = scenario;
  Json body;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (scenario == "lindblad-match") {
      body = run_lindblad_match(config, sink, result.exit_code);
    } else if (scenario == "noncp-disc") {
      body = run_noncp_disc(config, sink, result.exit_code);
    } else if (scenario == "tls-decay") {
      body = run_tls_decay(config, sink, result.exit_code);
    } else if (scenario == "tls-network") {
      body = run_tls_network(config, sink, result.exit_code);
    } else {
      body = run_compile_circuit(config, sink, result.exit_code);
    }
  } catch (const std::exception& e) {
    result.exit_code = 2;
    body["error"] = e.what();
  }
  const auto stop = std::chrono::steady_clock::now();

  Json summary;
  summary["scenario"] = scenario;
  summary["schema_version"] = 1;
  for (auto& [key, value] : body.items()) summary[key] = value;
  summary["exit_code"] = result.exit_code;
  summary["wall_clock_seconds"] =
      std::chrono::duration<double>(stop - start).count();
  summary["config"] = config;
  summary["artifacts"] = sink.list;
  write_file_atomic(out_dir / "run_summary.json", summary.dump(2) + "\n");

  result.document = summary;
  return result;
}

}  // namespace purodyn
