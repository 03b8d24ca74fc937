#pragma once

// Time-dependent interaction envelopes and the real-vector parameterization
// of static Hermitian generators.

#include <variant>
#include <vector>

#include "purodyn/errors.hpp"
#include "purodyn/types.hpp"

namespace purodyn {

struct ExponentialEnvelope {
  double alpha = 0.0;  // decay rate, 1/a.u., >= 0
};

struct GaussianPulse {
  double center = 0.0;     // t_i, a.u.
  double amplitude = 0.0;  // a_i
  double width = 1.0;      // b_i, > 0
};

struct GaussianTrainEnvelope {
  std::vector<GaussianPulse> pulses;
};

// sin(t^2 + t)^2, no free parameters.
struct SinSquaredEnvelope {};

struct ConstantEnvelope {
  double value = 1.0;
};

using EnvelopeSpec = std::variant<ExponentialEnvelope, GaussianTrainEnvelope,
                                  SinSquaredEnvelope, ConstantEnvelope>;

double eval_envelope(const EnvelopeSpec& envelope, double t);

/// Bijection between R^(n^2) and n x n Hermitian matrices. Layout: first n
/// entries are the diagonal, then row-major upper-triangle (re, im) pairs.
ComplexMatrix params_to_hermitian(const RealVector& v, Index n);
RealVector hermitian_to_params(const ComplexMatrix& h);

/// envelope(t) * H' with H' decoded from base_params on dimension dim.
struct InteractionSpec {
  EnvelopeSpec envelope;
  RealVector base_params;  // length dim^2
  Index dim = 0;
};

ComplexMatrix build_interaction(const InteractionSpec& spec, double t);

}  // namespace purodyn
