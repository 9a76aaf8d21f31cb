#include "triwit/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triwit {

namespace {

double max_abs(const Mat8& m) { return m.cwiseAbs().maxCoeff(); }

void require_hermitian(const Mat8& m, double tol, const char* who) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian (max deviation " +
                                std::to_string(dev) + ")");
  }
}

}  // namespace

const char* party_name(Party x) {
  switch (x) {
    case Party::A: return "A";
    case Party::B: return "B";
    default: return "C";
  }
}

const char* partition_name(Party x) {
  switch (x) {
    case Party::A: return "A-BC";
    case Party::B: return "B-AC";
    default: return "C-AB";
  }
}

int party_bit(Party x) {
  switch (x) {
    case Party::A: return 4;
    case Party::B: return 2;
    default: return 1;
  }
}

PureState::PureState(const Vec8& amp) : amp_(amp) {
  const double n2 = amp.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-12) {
    throw std::invalid_argument("pure state is not normalized: |amp|^2 = " + std::to_string(n2));
  }
}

PureState PureState::normalized(const Vec8& raw) {
  const double n = raw.norm();
  if (n < 1e-14) throw std::invalid_argument("cannot normalize the zero vector");
  return PureState(Vec8(raw / n));
}

DensityMatrix::DensityMatrix(const Mat8& m) : m_(m) {
  require_hermitian(m, 1e-12, "density matrix");
  const double tr_dev = std::abs(m.trace() - cd(1.0, 0.0));
  if (tr_dev > 1e-12) {
    throw std::invalid_argument("density matrix trace deviates from 1 by " + std::to_string(tr_dev));
  }
  const double lo = min_eigenvalue(m);
  if (lo < -1e-9) {
    throw std::invalid_argument("density matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(lo) + ")");
  }
}

DensityMatrix DensityMatrix::projector(const PureState& psi) {
  return DensityMatrix(Mat8(psi.amp() * psi.amp().adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Mat8(Mat8::Identity() / 8.0));
}

PureState product_vector(const Vec2& a, const Vec2& b, const Vec2& c) {
  if (a.norm() < 1e-14 || b.norm() < 1e-14 || c.norm() < 1e-14) {
    throw std::invalid_argument("product_vector: zero-norm factor");
  }
  Vec8 amp;
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      for (int ic = 0; ic < 2; ++ic) amp(basis_index(ia, ib, ic)) = a(ia) * b(ib) * c(ic);
  return PureState::normalized(amp);
}

Mat8 kron3(const Mat2& a, const Mat2& b, const Mat2& c) {
  Mat8 out;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      out(i, j) = a((i >> 2) & 1, (j >> 2) & 1) * b((i >> 1) & 1, (j >> 1) & 1) * c(i & 1, j & 1);
  return out;
}

Vec8 apply_local(const Mat2& u, Party x, const Vec8& v) {
  const int bit = party_bit(x);
  Vec8 out = Vec8::Zero();
  for (int i = 0; i < 8; ++i) {
    const int b = (i & bit) ? 1 : 0;
    const int base = i & ~bit;
    out(i) = u(b, 0) * v(base) + u(b, 1) * v(base | bit);
  }
  return out;
}

Mat8 partial_transpose(const Mat8& m, Party x) {
  const int bit = party_bit(x);
  Mat8 out;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const int nr = (r & ~bit) | (c & bit);
      const int nc = (c & ~bit) | (r & bit);
      out(nr, nc) = m(r, c);
    }
  }
  return out;
}

Mat2 reduced_qubit(const Mat8& rho, Party x) {
  const int bit = party_bit(x);
  Mat2 out = Mat2::Zero();
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      cd s = 0.0;
      for (int rest = 0; rest < 8; ++rest) {
        if (rest & bit) continue;  // enumerate the other parties only
        s += rho(rest | (u ? bit : 0), rest | (v ? bit : 0));
      }
      out(u, v) = s;
    }
  }
  return out;
}

Mat2 reduced_qubit(const PureState& psi, Party x) {
  const int bit = party_bit(x);
  Mat2 out = Mat2::Zero();
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      cd s = 0.0;
      for (int rest = 0; rest < 8; ++rest) {
        if (rest & bit) continue;
        s += psi.amp(rest | (u ? bit : 0)) * std::conj(psi.amp(rest | (v ? bit : 0)));
      }
      out(u, v) = s;
    }
  return out;
}

std::array<double, 2> eig2_hermitian(const Mat2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double half_gap = 0.5 * (a - d);
  const double disc = std::sqrt(half_gap * half_gap + std::norm(m(0, 1)));
  const double mean = 0.5 * (a + d);
  return {mean - disc, mean + disc};
}

EigResult eig_hermitian(const Mat8& m) {
  require_hermitian(m, 1e-10 * (1.0 + max_abs(m)), "eig_hermitian");

  // Cyclic Jacobi on the Hermitian matrix; at dimension 8 robustness matters
  // more than asymptotics.
  Mat8 a = 0.5 * (m + m.adjoint());
  Mat8 v = Mat8::Identity();
  const double scale = a.norm();
  const double target = 1e-14 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 8; ++p)
      for (int q = p + 1; q < 8; ++q) off += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off) <= target || scale == 0.0) break;
    if (sweep == 99) throw numeric_error("eig_hermitian: Jacobi sweep limit reached");

    for (int p = 0; p < 8; ++p) {
      for (int q = p + 1; q < 8; ++q) {
        const cd g = a(p, q);
        if (std::abs(g) <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * std::abs(g), app - aqq);
        const double c = std::cos(theta);
        const cd s = std::sin(theta) * std::exp(cd(0.0, -std::arg(g)));
        // Columns, then rows by Hermiticity: A <- U^dag A U with
        // U = [[c, -conj(s)], [s, c]] acting on (p,q).
        for (int k = 0; k < 8; ++k) {
          const cd akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + s * akq;
          a(k, q) = -std::conj(s) * akp + c * akq;
        }
        for (int k = 0; k < 8; ++k) {
          const cd apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(s) * aqk;
          a(q, k) = -s * apk + c * aqk;
        }
        a(p, q) = cd(0.5, 0.0) * (a(p, q) + std::conj(a(q, p)));
        a(q, p) = std::conj(a(p, q));
        for (int k = 0; k < 8; ++k) {
          const cd vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + s * vkq;
          v(k, q) = -std::conj(s) * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 8> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigResult out;
  for (int k = 0; k < 8; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    Vec8 col = v.col(order[k]);
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < 8; ++i) {
      const double mag = std::abs(col(i));
      if (mag > best) {
        best = mag;
        imax = i;
      }
    }
    if (best > 0.0) col *= std::conj(col(imax)) / best;  // pin the phase
    out.vectors.col(k) = col;
  }
  return out;
}

double min_eigenvalue(const Mat8& m) { return eig_hermitian(m).values[0]; }

RankKernel rank_kernel(const Mat8& m, const Tolerances& tol) {
  const EigResult eig = eig_hermitian(m);
  double top = 0.0;
  for (double lam : eig.values) top = std::max(top, std::abs(lam));
  const double cut = tol.rank_rel_tol * top;

  RankKernel out;
  for (int k = 0; k < 8; ++k) {
    if (std::abs(eig.values[k]) > cut) {
      ++out.rank;
    } else {
      out.kernel.push_back(eig.vectors.col(k));
    }
  }
  return out;
}

RankSignature rank_signature(const DensityMatrix& rho, const Tolerances& tol) {
  RankSignature sig;
  sig.r = rank_kernel(rho.mat(), tol).rank;
  sig.rA = rank_kernel(partial_transpose(rho.mat(), Party::A), tol).rank;
  sig.rB = rank_kernel(partial_transpose(rho.mat(), Party::B), tol).rank;
  sig.rC = rank_kernel(partial_transpose(rho.mat(), Party::C), tol).rank;
  return sig;
}

double max_subtractable_weight(const DensityMatrix& rho, const PureState& psi,
                               const Tolerances& tol) {
  const EigResult eig = eig_hermitian(rho.mat());
  double top = 0.0;
  for (double lam : eig.values) top = std::max(top, std::abs(lam));
  const double cut = tol.rank_rel_tol * top;

  // Quadratic form <psi| rho^+ |psi> over the retained spectral components;
  // a component of psi outside the range forces lambda = 0.
  double qform = 0.0;
  double outside = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double w = std::norm((eig.vectors.col(k).adjoint() * psi.amp())(0));
    if (std::abs(eig.values[k]) > cut) {
      qform += w / eig.values[k];
    } else {
      outside += w;
    }
  }
  double analytic = 0.0;
  if (outside <= 1e-12) analytic = std::min(1.0, qform > 0.0 ? 1.0 / qform : 0.0);

  // Certify by bisection on the minimum eigenvalue of rho - lambda P. The
  // bisection targets the true positivity boundary (tight tolerance), not the
  // looser psd_tol acceptance, so both routes estimate the same quantity.
  const Mat8 proj = psi.amp() * psi.amp().adjoint();
  const double tight = std::max(1e-12, -1.5 * std::min(0.0, min_eigenvalue(rho.mat())));
  const auto feasible = [&](double lam) {
    return min_eigenvalue(Mat8(rho.mat() - lam * proj)) >= -tight;
  };
  double lo = 0.0, hi = 1.0;
  if (feasible(1.0)) {
    lo = 1.0;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }

  if (std::abs(analytic - lo) <= 1e-8 && feasible(analytic)) return analytic;
  return lo;
}

}  // namespace triwit
