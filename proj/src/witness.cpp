#include "triwit/witness.hpp"

#include <cmath>

namespace triwit {

const char* boundary_name(Boundary b) {
  return b == Boundary::BBoundary ? "B-boundary" : "W-boundary";
}

const char* std_witness_name(StdWitnessKind kind) {
  switch (kind) {
    case StdWitnessKind::GHZ: return "GHZ";
    case StdWitnessKind::W1: return "W1";
    default: return "W2";
  }
}

Witness projector_witness(double c, const PureState& psi, Boundary boundary) {
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("projector_witness: boundary constant must lie in (0,1)");
  }
  Witness w{Mat8(c * Mat8::Identity() - psi.amp() * psi.amp().adjoint()), boundary, c, psi};
  return w;
}

Witness std_witness(StdWitnessKind kind) {
  switch (kind) {
    case StdWitnessKind::GHZ: return projector_witness(0.75, ghz_state(), Boundary::WBoundary);
    case StdWitnessKind::W1: return projector_witness(2.0 / 3.0, w_state(), Boundary::BBoundary);
    default: return projector_witness(0.5, ghz_state(), Boundary::BBoundary);
  }
}

double evaluate(const Witness& w, const DensityMatrix& rho) {
  const cd expect = (w.proj.amp().adjoint() * rho.mat() * w.proj.amp())(0);
  return w.c - expect.real();
}

CanonicalReport validate_canonical(const CanonicalWitnessParts& parts, Boundary boundary,
                                   const Tolerances& tol) {
  CanonicalReport rep;
  rep.q_psd = min_eigenvalue(parts.q) >= -tol.psd_tol;
  rep.eps_positive = parts.eps > 0.0;
  rep.q_kernel_dim = 8 - rank_kernel(parts.q, tol).rank;
  rep.kernel_ok = boundary == Boundary::WBoundary ? rep.q_kernel_dim == 1 : rep.q_kernel_dim < 4;
  return rep;
}

ViolationResult optimize_violation(const DensityMatrix& rho, const Witness& base,
                                   const OptimizerConfig& cfg) {
  const Vec8& proj = base.proj.amp();
  const ObjectiveFn objective = [&](const std::vector<double>& p) {
    Vec8 v = apply_local(rotation_from_angles(p[0], p[1], p[2]), Party::A, proj);
    v = apply_local(rotation_from_angles(p[3], p[4], p[5]), Party::B, v);
    v = apply_local(rotation_from_angles(p[6], p[7], p[8]), Party::C, v);
    return base.c - (v.adjoint() * rho.mat() * v)(0).real();
  };

  const double pi = 3.14159265358979323846;
  std::vector<double> lo(9, -pi), hi(9, pi);
  // the identity rotation start guarantees we never lose to the plain evaluation
  const std::vector<std::vector<double>> extra{std::vector<double>(9, 0.0)};
  const MultistartResult res = multistart_minimize(objective, lo, hi, cfg, extra);

  ViolationResult out;
  out.value = res.value;
  std::copy(res.x.begin(), res.x.end(), out.angles.begin());
  return out;
}

Mat2 haar_qubit_unitary(Rng& rng) {
  // random unit first column, orthogonal second column, random relative phase
  Vec2 a;
  a << cd(rng.normal(), rng.normal()), cd(rng.normal(), rng.normal());
  a.normalize();
  const double phase = rng.uniform(0.0, 6.283185307179586);
  Mat2 u;
  u.col(0) = a;
  u(0, 1) = -std::conj(a(1)) * std::exp(cd(0.0, phase));
  u(1, 1) = std::conj(a(0)) * std::exp(cd(0.0, phase));
  return u;
}

Vec2 random_qubit(Rng& rng) {
  Vec2 q;
  q << cd(rng.normal(), rng.normal()), cd(rng.normal(), rng.normal());
  q.normalize();
  return q;
}

PureState sample_product_vector(Rng& rng) {
  return product_vector(random_qubit(rng), random_qubit(rng), random_qubit(rng));
}

PureState sample_bisep_vector(Party cut, Rng& rng) {
  const Vec2 single = random_qubit(rng);
  std::array<cd, 4> pair;
  double n2 = 0.0;
  for (auto& c : pair) {
    c = cd(rng.normal(), rng.normal());
    n2 += std::norm(c);
  }
  const double inv = 1.0 / std::sqrt(n2);

  const int bit = party_bit(cut);
  const auto rest_bits = [&]() -> std::array<int, 2> {
    switch (cut) {
      case Party::A: return {2, 1};
      case Party::B: return {4, 1};
      default: return {4, 2};
    }
  }();

  Vec8 amp = Vec8::Zero();
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const int idx = (s ? bit : 0) | (i ? rest_bits[0] : 0) | (j ? rest_bits[1] : 0);
        amp(idx) = single(s) * pair[2 * i + j] * inv;
      }
  return PureState::normalized(amp);
}

PureState sample_w_type_vector(Rng& rng) {
  WGenParams gen;
  double n2 = 0.0;
  for (double& l : gen.lambda) {
    l = std::abs(rng.normal());
    n2 += l * l;
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (double& l : gen.lambda) l *= inv;

  Vec8 amp = gen_w_type(gen).amp();
  for (Party x : kParties) amp = apply_local(haar_qubit_unitary(rng), x, amp);
  return PureState::normalized(amp);
}

DensityMatrix sample_mixture(SampleClass cls, Rng& rng) {
  const int n = rng.uniform_int(1, 8);
  std::vector<double> w(n);
  double wsum = 0.0;
  for (double& wi : w) {
    wi = -std::log(1.0 - rng.uniform());
    wsum += wi;
  }

  Mat8 rho = Mat8::Zero();
  for (int i = 0; i < n; ++i) {
    const int kinds = cls == SampleClass::Separable ? 1 : (cls == SampleClass::Biseparable ? 4 : 5);
    const int pick = rng.uniform_int(0, kinds - 1);
    PureState psi = [&]() {
      switch (pick) {
        case 0: return sample_product_vector(rng);
        case 1: return sample_bisep_vector(Party::A, rng);
        case 2: return sample_bisep_vector(Party::B, rng);
        case 3: return sample_bisep_vector(Party::C, rng);
        default: return sample_w_type_vector(rng);
      }
    }();
    rho += (w[i] / wsum) * (psi.amp() * psi.amp().adjoint());
  }
  return DensityMatrix(Mat8(0.5 * (rho + rho.adjoint())));
}

}  // namespace triwit
