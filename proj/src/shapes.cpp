#include "purodyn/shapes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "purodyn/qmath.hpp"

namespace purodyn {

double eval_envelope(const EnvelopeSpec& envelope, double t) {
  return std::visit(
      [t](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExponentialEnvelope>) {
          return std::exp(-e.alpha * t);
        } else if constexpr (std::is_same_v<T, GaussianTrainEnvelope>) {
          double sum = 0.0;
          for (const GaussianPulse& p : e.pulses) {
            const double u = (t - p.center) / p.width;
            sum += p.amplitude / (p.width * std::sqrt(2.0 * std::numbers::pi)) *
                   std::exp(-0.5 * u * u);
          }
          return sum;
        } else if constexpr (std::is_same_v<T, SinSquaredEnvelope>) {
          const double s = std::sin(t * t + t);
          return s * s;
        } else {
          return e.value;
        }
      },
      envelope);
}

ComplexMatrix params_to_hermitian(const RealVector& v, Index n) {
  if (v.size() != n * n) {
    std::ostringstream msg;
    msg << "params_to_hermitian: got " << v.size() << " parameters, expected " << n * n;
    throw LengthMismatch(msg.str());
  }
  ComplexMatrix h(n, n);
  for (Index i = 0; i < n; ++i) h(i, i) = v[i];
  Index p = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      h(i, j) = Complex(v[p], v[p + 1]);
      h(j, i) = std::conj(h(i, j));
      p += 2;
    }
  }
  return h;
}

RealVector hermitian_to_params(const ComplexMatrix& h) {
  if (!is_hermitian(h, 1e-12)) {
    throw NonHermitianInput("hermitian_to_params: input is not Hermitian");
  }
  const Index n = h.rows();
  RealVector v(n * n);
  for (Index i = 0; i < n; ++i) v[i] = h(i, i).real();
  Index p = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      v[p] = h(i, j).real();
      v[p + 1] = h(i, j).imag();
      p += 2;
    }
  }
  return v;
}

ComplexMatrix build_interaction(const InteractionSpec& spec, double t) {
  return eval_envelope(spec.envelope, t) * params_to_hermitian(spec.base_params, spec.dim);
}

}  // namespace purodyn
