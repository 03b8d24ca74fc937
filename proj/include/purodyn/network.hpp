#pragma once

// Coupled two-level-system network: Hamiltonian builders on the full
// tensor-product space, excited-state populations, and backflow detection.

#include <string>
#include <vector>

#include "purodyn/shapes.hpp"
#include "purodyn/states.hpp"

namespace purodyn {

/// Two system nodes exchange-coupled with strength coupling_c; one
/// uncoupled bath node per system node. Composite ordering is
/// [S1, S2, B1, B2] with S1 as the leftmost tensor factor.
struct TLSNetworkSpec {
  int system_nodes = 2;
  int bath_nodes = 2;
  double e0 = -0.5;  // ground energy, a.u.
  double e1 = 0.5;   // excited energy, a.u.
  double coupling_c = 0.2;
  std::vector<EnvelopeSpec> edge_envelopes;   // one per (S_i, B_i) edge
  std::vector<RealVector> edge_base_params;   // exchange strength [g] or 16 Hermitian params
  bool full_hermitian_edges = false;
};

/// H_S1 (x) I + I (x) H_S2 + C (sigma+ sigma- + sigma- sigma+) on 4 dims.
ComplexMatrix build_system_hamiltonian(const TLSNetworkSpec& spec);

/// Uncoupled H_B1 (x) I + I (x) H_B2 on 4 dims.
ComplexMatrix build_bath_hamiltonian(const TLSNetworkSpec& spec);

/// Sum over edges of envelope_i(t) * embed(generator_i) on the 16-dim
/// composite space, identity on the remaining nodes.
ComplexMatrix build_edge_interactions(const TLSNetworkSpec& spec, double t);

/// Excited-state projector expectation for one node of a tensor-product
/// layout (dims per node, leftmost factor first).
double excited_population(const DensityMatrix& rho, int node,
                          const std::vector<Index>& layout);

struct PopulationSeries {
  std::vector<double> times;
  std::vector<std::string> labels;                 // per node
  std::vector<std::vector<double>> populations;    // populations[node][k]
};

struct BackflowInterval {
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Maximal intervals where the summed population of node_set rises: the
/// windowed slope (P[k+w] - P[k]) / (t[k+w] - t[k]) exceeds the threshold.
std::vector<BackflowInterval> detect_backflow(const PopulationSeries& series,
                                              const std::vector<int>& node_set,
                                              int window, double threshold = 1e-4);

/// Generator of one system-bath edge on the (S_i, B_i) pair (4x4):
/// exchange form g (s+ (x) s- + s- (x) s+) or a full Hermitian decode.
ComplexMatrix edge_generator(const TLSNetworkSpec& spec, int edge);

}  // namespace purodyn
