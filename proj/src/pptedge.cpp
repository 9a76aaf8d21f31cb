#include "triwit/pptedge.hpp"

#include <cmath>
#include <limits>

#include "triwit/rng.hpp"

namespace triwit {

EdgeFamilyParams::EdgeFamilyParams(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) {
    throw std::invalid_argument("edge family parameters must be positive");
  }
}

double EdgeFamilyParams::n() const { return 2.0 + a + 1.0 / a + b + 1.0 / b + c + 1.0 / c; }

PptSignature ppt_signature(const DensityMatrix& rho, const Tolerances& tol) {
  PptSignature sig;
  sig.pptA = min_eigenvalue(partial_transpose(rho.mat(), Party::A)) >= -tol.psd_tol;
  sig.pptB = min_eigenvalue(partial_transpose(rho.mat(), Party::B)) >= -tol.psd_tol;
  sig.pptC = min_eigenvalue(partial_transpose(rho.mat(), Party::C)) >= -tol.psd_tol;
  return sig;
}

namespace {

std::array<double, 8> edge_family_diagonal(const EdgeFamilyParams& p) {
  return {1.0, p.a, p.b, p.c, 1.0 / p.c, 1.0 / p.b, 1.0 / p.a, 1.0};
}

PureState two_term_state(int i, double wi, int j, double wj) {
  Vec8 amp = Vec8::Zero();
  amp(i) = wi;
  amp(j) = wj;
  return PureState::normalized(amp);
}

}  // namespace

DensityMatrix edge_family(const EdgeFamilyParams& p) {
  const double n = p.n();
  Mat8 m = Mat8::Zero();
  const auto diag = edge_family_diagonal(p);
  for (int i = 0; i < 8; ++i) m(i, i) = diag[i] / n;
  m(0, 7) = m(7, 0) = 1.0 / n;
  return DensityMatrix(m);
}

EdgeFamilyKernels edge_family_kernels(const EdgeFamilyParams& p) {
  return {two_term_state(0, 1.0, 7, -1.0),          // K(rho)
          two_term_state(3, 1.0, 4, -p.c),          // K(rho^T_A)
          two_term_state(2, 1.0, 5, -p.b),          // K(rho^T_B)
          two_term_state(1, 1.0, 6, -p.a)};         // K(rho^T_C)
}

bool edge_family_is_edge(const EdgeFamilyParams& p, const Tolerances& tol) {
  return std::abs(p.a * p.b - p.c) > tol.zero_tol * std::max(1.0, p.c);
}

namespace {

Vec8 build_product(const Vec2& a, const Vec2& b, const Vec2& c) {
  Vec8 v;
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      for (int ic = 0; ic < 2; ++ic) v(basis_index(ia, ib, ic)) = a(ia) * b(ib) * c(ic);
  return v;
}

double kernel_weight(const std::vector<Vec8>& basis, const Vec8& v) {
  double s = 0.0;
  for (const Vec8& k : basis) s += std::norm((k.adjoint() * v)(0));
  return s;
}

// One alternating-least-squares pass: with the other two factors fixed, each
// term of the objective is an exact quadratic form in the remaining qubit (or
// its conjugate), so the optimal factor is the bottom eigenvector of a real
// 4x4 form.
void als_update_party(int which, std::array<Vec2, 3>& q,
                      const std::array<std::vector<Vec8>, 4>& kernels) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();

  // term t conjugates party t-1; party `which` enters term t as e* iff
  // t == which+1, and the other two factors are conjugated per the term.
  for (int t = 0; t < 4; ++t) {
    if (kernels[t].empty()) continue;
    std::array<Vec2, 3> fixed = q;
    for (int pk = 0; pk < 3; ++pk) {
      if (t == pk + 1 && pk != which) fixed[pk] = q[pk].conjugate();
    }
    const bool conj_this = (t == which + 1);

    std::array<Vec2, 3> unit0 = fixed, unit1 = fixed;
    unit0[which] << 1.0, 0.0;
    unit1[which] << 0.0, 1.0;
    const Vec8 col0 = build_product(unit0[0], unit0[1], unit0[2]);
    const Vec8 col1 = build_product(unit1[0], unit1[1], unit1[2]);

    for (const Vec8& k : kernels[t]) {
      const cd a0 = (k.adjoint() * col0)(0);
      const cd a1 = (k.adjoint() * col1)(0);
      // row of the complex design matrix; stack real and imaginary parts in
      // coordinates z = (Re e0, Re e1, Im e0, Im e1)
      Eigen::Matrix<double, 2, 4> b;
      const double s = conj_this ? -1.0 : 1.0;  // e* flips the sign of Im e
      b << a0.real(), a1.real(), -s * a0.imag(), -s * a1.imag(),
           a0.imag(), a1.imag(), s * a0.real(), s * a1.real();
      m += b.transpose() * b;
    }
  }

  if (m.norm() == 0.0) return;  // this factor is unconstrained
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(m);
  const Eigen::Vector4d z = solver.eigenvectors().col(0);
  Vec2 e;
  e << cd(z(0), z(2)), cd(z(1), z(3));
  const double n = e.norm();
  if (n > 1e-14) q[which] = e / n;
}

}  // namespace

EdgeVerdict product_in_ranges_search(const DensityMatrix& rho, const OptimizerConfig& cfg,
                                     const Tolerances& tol) {
  std::array<std::vector<Vec8>, 4> kernels;
  kernels[0] = rank_kernel(rho.mat(), tol).kernel;
  kernels[1] = rank_kernel(partial_transpose(rho.mat(), Party::A), tol).kernel;
  kernels[2] = rank_kernel(partial_transpose(rho.mat(), Party::B), tol).kernel;
  kernels[3] = rank_kernel(partial_transpose(rho.mat(), Party::C), tol).kernel;

  const bool any_kernel = !kernels[0].empty() || !kernels[1].empty() || !kernels[2].empty() ||
                          !kernels[3].empty();
  if (!any_kernel) {
    // full-rank state and transposes: every product vector qualifies
    Vec2 ket0;
    ket0 << 1.0, 0.0;
    return {false, 0.0, product_vector(ket0, ket0, ket0)};
  }

  const auto objective = [&](const std::array<Vec2, 3>& q) {
    double s = kernel_weight(kernels[0], build_product(q[0], q[1], q[2]));
    s += kernel_weight(kernels[1], build_product(q[0].conjugate(), q[1], q[2]));
    s += kernel_weight(kernels[2], build_product(q[0], q[1].conjugate(), q[2]));
    s += kernel_weight(kernels[3], build_product(q[0], q[1], q[2].conjugate()));
    return s;
  };

  // multistart over the (theta, phi) box per qubit, alternating sweeps inside
  Rng rng(cfg.seed);
  const double pi = 3.14159265358979323846;
  double best = std::numeric_limits<double>::infinity();
  std::array<Vec2, 3> best_q;

  for (int s = 0; s < cfg.starts; ++s) {
    std::array<Vec2, 3> q;
    for (int k = 0; k < 3; ++k) {
      const double theta = rng.uniform(0.0, 0.5 * pi);
      const double phi = rng.uniform(0.0, 2.0 * pi);
      q[k] << std::cos(theta), std::sin(theta) * std::exp(cd(0.0, phi));
    }

    double prev = objective(q);
    const int sweeps = std::max(60, cfg.max_iters / 10);
    for (int it = 0; it < sweeps; ++it) {
      for (int which = 0; which < 3; ++which) als_update_party(which, q, kernels);
      const double cur = objective(q);
      if (prev - cur < 1e-18 + 1e-15 * cur) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    if (prev < best) {
      best = prev;
      best_q = q;
    }
  }

  return {best > 1e-6, best, product_vector(best_q[0], best_q[1], best_q[2])};
}

std::vector<WeightedState> edge_family_bisep_decomposition(const EdgeFamilyParams& p,
                                                           Party partition, int n_phases) {
  if (n_phases < 3) throw std::invalid_argument("phase average needs at least 3 points");

  const double n = p.n();
  const auto diag = edge_family_diagonal(p);

  // positions of |0_X 1~> and |1_X 0~> inside the 2x2 corner subspace
  int i01;
  switch (partition) {
    case Party::A: i01 = 3; break;
    case Party::B: i01 = 5; break;
    default: i01 = 6; break;
  }
  const int i10 = 7 - i01;
  const double d1 = diag[i01];
  const double q = std::sqrt(d1);   // amplitude on |0_X 1~>
  const double y = 1.0 / q;         // amplitude on |1_X 0~>

  std::vector<WeightedState> parts;

  // basis product projectors for the diagonal outside the corner subspace
  for (int i = 1; i < 7; ++i) {
    if (i == i01 || i == i10) continue;
    Vec8 amp = Vec8::Zero();
    amp(i) = 1.0;
    parts.push_back({diag[i] / n, PureState(amp)});
  }

  // uniform phase average spanning the corner block and its diagonal pair
  const double norm2 = (1.0 + y * y) * (1.0 + q * q);  // = 2 + d1 + 1/d1
  const double w = norm2 / (n * n_phases);
  for (int k = 0; k < n_phases; ++k) {
    const double phi = 2.0 * 3.14159265358979323846 * k / n_phases;
    Vec8 amp = Vec8::Zero();
    amp(0) = 1.0;
    amp(i01) = q * std::exp(cd(0.0, -phi));
    amp(i10) = y * std::exp(cd(0.0, phi));
    amp(7) = 1.0;
    parts.push_back({w, PureState::normalized(amp)});
  }
  return parts;
}

}  // namespace triwit
