#include "purodyn/network.hpp"

#include <cmath>
#include <sstream>

namespace purodyn {

namespace {

void require_two_nodes(const TLSNetworkSpec& spec) {
  if (spec.system_nodes != 2 || spec.bath_nodes != 2) {
    std::ostringstream msg;
    msg << "network supports exactly two system nodes with matching baths, got "
        << spec.system_nodes << " system / " << spec.bath_nodes << " bath";
    throw UnsupportedNodeCount(msg.str());
  }
  if (!(spec.e1 > spec.e0)) {
    throw Error("network requires e1 > e0");
  }
}

ComplexMatrix node_hamiltonian(const TLSNetworkSpec& spec) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = spec.e0;
  h(1, 1) = spec.e1;
  return h;
}

// Places a two-site operator onto sites (a, b) of a tensor-product space
// with one qubit per site, identity elsewhere. Site 0 is the leftmost
// factor. op is 4x4 ordered as |x_a x_b>.
ComplexMatrix two_site_embed(const ComplexMatrix& op, int site_a, int site_b,
                             int total_sites) {
  const Index dim = Index{1} << total_sites;
  const int shift_a = total_sites - 1 - site_a;
  const int shift_b = total_sites - 1 - site_b;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Index row = 0; row < dim; ++row) {
    const Index ra = (row >> shift_a) & 1;
    const Index rb = (row >> shift_b) & 1;
    const Index rest = row & ~((Index{1} << shift_a) | (Index{1} << shift_b));
    for (Index ca = 0; ca < 2; ++ca) {
      for (Index cb = 0; cb < 2; ++cb) {
        const Complex val = op(2 * ra + rb, 2 * ca + cb);
        if (val == Complex(0, 0)) continue;
        const Index col = rest | (ca << shift_a) | (cb << shift_b);
        out(row, col) = val;
      }
    }
  }
  return out;
}

}  // namespace

ComplexMatrix build_system_hamiltonian(const TLSNetworkSpec& spec) {
  require_two_nodes(spec);
  const ComplexMatrix h1 = node_hamiltonian(spec);
  const ComplexMatrix exchange =
      kron(sigma_plus(), sigma_minus()) + kron(sigma_minus(), sigma_plus());
  return kron(h1, identity(2)) + kron(identity(2), h1) + spec.coupling_c * exchange;
}

ComplexMatrix build_bath_hamiltonian(const TLSNetworkSpec& spec) {
  require_two_nodes(spec);
  const ComplexMatrix h1 = node_hamiltonian(spec);
  return kron(h1, identity(2)) + kron(identity(2), h1);
}

ComplexMatrix edge_generator(const TLSNetworkSpec& spec, int edge) {
  require_two_nodes(spec);
  if (edge < 0 || edge >= spec.system_nodes) {
    throw IndexOutOfRange("edge index out of range");
  }
  const RealVector& params = spec.edge_base_params.at(static_cast<std::size_t>(edge));
  if (spec.full_hermitian_edges) {
    return params_to_hermitian(params, 4);
  }
  if (params.size() != 1) {
    throw LengthMismatch("exchange-form edges take a single strength parameter");
  }
  return params[0] * (kron(sigma_plus(), sigma_minus()) +
                      kron(sigma_minus(), sigma_plus()));
}

ComplexMatrix build_edge_interactions(const TLSNetworkSpec& spec, double t) {
  require_two_nodes(spec);
  if (spec.edge_envelopes.size() != 2 || spec.edge_base_params.size() != 2) {
    throw Error("network needs one envelope and one generator per edge");
  }
  ComplexMatrix out = ComplexMatrix::Zero(16, 16);
  for (int edge = 0; edge < 2; ++edge) {
    const double gamma = eval_envelope(spec.edge_envelopes[static_cast<std::size_t>(edge)], t);
    if (gamma == 0.0) continue;
    // Edge i couples S_i (site i) with B_i (site 2 + i).
    out += gamma * two_site_embed(edge_generator(spec, edge), edge, 2 + edge, 4);
  }
  return out;
}

double excited_population(const DensityMatrix& rho, int node,
                          const std::vector<Index>& layout) {
  if (node < 0 || static_cast<std::size_t>(node) >= layout.size()) {
    throw IndexOutOfRange("node index outside the layout");
  }
  Index dim = 1;
  for (Index d : layout) dim *= d;
  if (rho.dim() != dim) {
    throw DimensionMismatch("state dimension does not match the layout");
  }

  Index stride = 1;
  for (std::size_t k = layout.size(); k-- > static_cast<std::size_t>(node) + 1;) {
    stride *= layout[k];
  }
  const Index node_dim = layout[static_cast<std::size_t>(node)];

  // Tr(rho P) with P the projector on the node's highest level.
  double pop = 0.0;
  for (Index i = 0; i < dim; ++i) {
    const Index level = (i / stride) % node_dim;
    if (level == node_dim - 1) pop += rho.matrix()(i, i).real();
  }
  return pop;
}

std::vector<BackflowInterval> detect_backflow(const PopulationSeries& series,
                                              const std::vector<int>& node_set,
                                              int window, double threshold) {
  const std::size_t len = series.times.size();
  if (window < 1 || len <= static_cast<std::size_t>(window)) {
    return {};
  }
  std::vector<double> total(len, 0.0);
  for (int node : node_set) {
    if (node < 0 || static_cast<std::size_t>(node) >= series.populations.size()) {
      throw IndexOutOfRange("node index outside the population series");
    }
    const std::vector<double>& pop = series.populations[static_cast<std::size_t>(node)];
    for (std::size_t k = 0; k < len; ++k) total[k] += pop[k];
  }

  const std::size_t w = static_cast<std::size_t>(window);
  std::vector<BackflowInterval> intervals;
  bool open = false;
  std::size_t start = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k + w < len; ++k) {
    const double slope =
        (total[k + w] - total[k]) / (series.times[k + w] - series.times[k]);
    if (slope > threshold) {
      if (!open) {
        open = true;
        start = k;
      }
      last = k;
    } else if (open) {
      intervals.push_back({series.times[start], series.times[last + w]});
      open = false;
    }
  }
  if (open) intervals.push_back({series.times[start], series.times[last + w]});
  return intervals;
}

}  // namespace purodyn
