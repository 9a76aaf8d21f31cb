#include "triwit/puretri.hpp"

#include <algorithm>
#include <cmath>

namespace triwit {

namespace {

void check_unit_sum_of_squares(const double* lam, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (lam[i] < 0.0) throw std::invalid_argument("generator magnitudes must be nonnegative");
    s += lam[i] * lam[i];
  }
  if (std::abs(s - 1.0) > 1e-12) {
    throw std::invalid_argument("generator magnitudes must have unit sum of squares, got " +
                                std::to_string(s));
  }
}

// Polynomial evaluation and one Newton step, used to polish quartic roots.
cd poly_eval(const std::vector<cd>& coeff, cd z) {
  cd acc = 0.0;
  for (int k = static_cast<int>(coeff.size()) - 1; k >= 0; --k) acc = acc * z + coeff[k];
  return acc;
}

cd poly_deriv_eval(const std::vector<cd>& coeff, cd z) {
  cd acc = 0.0;
  for (int k = static_cast<int>(coeff.size()) - 1; k >= 1; --k)
    acc = acc * z + coeff[k] * static_cast<double>(k);
  return acc;
}

}  // namespace

const char* pure_class_name(PureClass c) {
  switch (c.kind) {
    case PureClass::Product: return "Product";
    case PureClass::Bisep:
      switch (c.partition) {
        case Party::A: return "Bisep(A-BC)";
        case Party::B: return "Bisep(B-AC)";
        default: return "Bisep(C-AB)";
      }
    case PureClass::Wtype: return "Wtype";
    default: return "GHZtype";
  }
}

PureState ghz_state() {
  Vec8 amp = Vec8::Zero();
  amp(0) = amp(7) = 1.0 / std::sqrt(2.0);
  return PureState(amp);
}

PureState w_state() {
  Vec8 amp = Vec8::Zero();
  amp(basis_index(1, 0, 0)) = amp(basis_index(0, 1, 0)) = amp(basis_index(0, 0, 1)) =
      1.0 / std::sqrt(3.0);
  return PureState(amp);
}

PureState gen_ghz_type(const GhzGenParams& p) {
  check_unit_sum_of_squares(p.lambda.data(), 5);
  if (p.theta < 0.0 || p.theta > 3.14159265358979323846 + 1e-12) {
    throw std::invalid_argument("theta must lie in [0, pi]");
  }
  Vec8 amp = Vec8::Zero();
  amp(basis_index(0, 0, 0)) = p.lambda[0];
  amp(basis_index(1, 0, 0)) = p.lambda[1] * std::exp(cd(0.0, p.theta));
  amp(basis_index(1, 0, 1)) = p.lambda[2];
  amp(basis_index(1, 1, 0)) = p.lambda[3];
  amp(basis_index(1, 1, 1)) = p.lambda[4];
  return PureState(amp);
}

PureState gen_w_type(const WGenParams& p) {
  check_unit_sum_of_squares(p.lambda.data(), 4);
  Vec8 amp = Vec8::Zero();
  amp(basis_index(0, 0, 0)) = p.lambda[0];
  amp(basis_index(1, 0, 0)) = p.lambda[1];
  amp(basis_index(1, 0, 1)) = p.lambda[2];
  amp(basis_index(1, 1, 0)) = p.lambda[3];
  return PureState(amp);
}

cd hyperdeterminant(const Vec8& a) {
  const cd a000 = a(0), a001 = a(1), a010 = a(2), a011 = a(3);
  const cd a100 = a(4), a101 = a(5), a110 = a(6), a111 = a(7);

  const cd d1 = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 +
                a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011;
  const cd d2 = a000 * a111 * (a011 * a100 + a101 * a010 + a110 * a001) +
                a011 * a100 * (a101 * a010 + a110 * a001) + a101 * a010 * a110 * a001;
  const cd d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;

  return d1 - 2.0 * d2 + 4.0 * d3;
}

double tangle(const PureState& psi) { return 4.0 * std::abs(hyperdeterminant(psi.amp())); }

PureClass classify_pure(const PureState& psi, const Tolerances& tol) {
  int rank1 = 0;
  Party single = Party::A;
  for (Party x : kParties) {
    const auto ev = eig2_hermitian(reduced_qubit(psi, x));
    const bool is_rank1 = std::abs(ev[0]) <= tol.rank_rel_tol * std::abs(ev[1]);
    if (is_rank1) {
      ++rank1;
      single = x;
    }
  }
  if (rank1 >= 2) return {PureClass::Product, Party::A};
  if (rank1 == 1) return {PureClass::Bisep, single};
  if (tangle(psi) > tol.zero_tol) return {PureClass::GHZtype, Party::A};
  return {PureClass::Wtype, Party::A};
}

ZeroTangleMix zero_tangle_mix(const PureState& psi1, const PureState& psi2) {
  const Vec8& v1 = psi1.amp();
  const Vec8& v2 = psi2.amp();
  const cd overlap = (v1.adjoint() * v2)(0);
  if (1.0 - std::norm(overlap) <= 1e-12) {
    throw std::invalid_argument("zero_tangle_mix: states are linearly dependent");
  }

  // g(z) = hyperdeterminant(psi1 + z psi2) has degree <= 4; recover its
  // coefficients from the values at z in {0, 1, i, -1, -i}.
  const cd c0 = hyperdeterminant(v1);
  std::array<cd, 4> h;
  const std::array<cd, 4> nodes{cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  for (int k = 0; k < 4; ++k) h[k] = hyperdeterminant(Vec8(v1 + nodes[k] * v2)) - c0;

  std::vector<cd> coeff(5);
  coeff[0] = c0;
  for (int j = 1; j <= 4; ++j) {
    cd s = 0.0;
    for (int k = 0; k < 4; ++k) {
      // i^{-jk}
      const int e = ((-j * k) % 4 + 4) % 4;
      static const std::array<cd, 4> ipow{cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
      s += h[k] * ipow[e];
    }
    coeff[j] = s / 4.0;
  }

  double cmax = 0.0;
  for (const cd& c : coeff) cmax = std::max(cmax, std::abs(c));
  const double strip = 1e-14 * std::max(cmax, 1e-300);

  if (cmax <= 1e-14) {
    // the whole pencil has vanishing tangle
    return {cd(1, 0), cd(0, 0), psi1};
  }

  int degree = 4;
  bool leading_stripped = false;
  while (degree > 0 && std::abs(coeff[degree]) <= strip) {
    --degree;
    leading_stripped = true;
  }

  std::vector<cd> candidates;
  if (degree >= 1) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -coeff[i] / coeff[degree];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    for (int i = 0; i < degree; ++i) {
      cd z = solver.eigenvalues()(i);
      const cd dp = poly_deriv_eval(coeff, z);
      if (std::abs(dp) > 1e-14) z -= poly_eval(coeff, z) / dp;  // one Newton polish
      candidates.push_back(z);
    }
  }

  struct Best {
    double tau = std::numeric_limits<double>::infinity();
    double zmag = std::numeric_limits<double>::infinity();
    cd alpha, beta;
    Vec8 amp;
  } best;

  const auto consider = [&](cd alpha, cd beta) {
    const Vec8 raw = alpha * v1 + beta * v2;
    const double n = raw.norm();
    if (n < 1e-9) return;
    const Vec8 unit = raw / n;
    const double tau = 4.0 * std::abs(hyperdeterminant(unit));
    const double zmag = std::abs(alpha) > 0.0 ? std::abs(beta / alpha)
                                              : std::numeric_limits<double>::infinity();
    if (tau < best.tau || (tau == best.tau && zmag < best.zmag)) {
      best = {tau, zmag, alpha / n, beta / n, unit};
    }
  };

  for (const cd& z : candidates) consider(cd(1, 0), z);
  if (leading_stripped) consider(cd(0, 0), cd(1, 0));  // root at infinity: psi2 itself
  if (std::abs(c0) <= strip) consider(cd(1, 0), cd(0, 0));

  if (!std::isfinite(best.tau)) {
    throw numeric_error("zero_tangle_mix: no admissible root found");
  }
  return {best.alpha, best.beta, PureState(best.amp)};
}

}  // namespace triwit
