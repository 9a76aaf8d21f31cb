#include "triwit/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "triwit/rng.hpp"

namespace triwit {

double nelder_mead(const ObjectiveFn& f, std::vector<double>& x, double step, int max_iters,
                   double ftol) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> pts(n + 1, x);
  std::vector<double> fv(n + 1);
  for (int i = 1; i <= n; ++i) pts[i][i - 1] += step;
  for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  std::vector<int> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  for (int iter = 0; iter < max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return fv[i] < fv[j]; });
    const int lo = order[0], hi = order[n], second = order[n - 1];
    if (fv[hi] - fv[lo] <= ftol * (1.0 + std::abs(fv[lo]))) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= n; ++i) {
      if (i == hi) continue;
      for (int d = 0; d < n; ++d) centroid[d] += pts[i][d];
    }
    for (int d = 0; d < n; ++d) centroid[d] /= n;

    for (int d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - pts[hi][d]);
    const double fr = f(xr);

    if (fr < fv[lo]) {
      for (int d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - pts[hi][d]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[hi] = xe;
        fv[hi] = fe;
      } else {
        pts[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[second]) {
      pts[hi] = xr;
      fv[hi] = fr;
    } else {
      if (fr < fv[hi]) {
        for (int d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (xr[d] - centroid[d]);
      } else {
        for (int d = 0; d < n; ++d) xc[d] = centroid[d] - 0.5 * (centroid[d] - pts[hi][d]);
      }
      const double fc = f(xc);
      if (fc < std::min(fr, fv[hi])) {
        pts[hi] = xc;
        fv[hi] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == lo) continue;
          for (int d = 0; d < n; ++d) pts[i][d] = pts[lo][d] + 0.5 * (pts[i][d] - pts[lo][d]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }

  int lo = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[lo]) lo = i;
  x = pts[lo];
  return fv[lo];
}

MultistartResult multistart_minimize(const ObjectiveFn& f, const std::vector<double>& lo,
                                     const std::vector<double>& hi, const OptimizerConfig& cfg,
                                     const std::vector<std::vector<double>>& extra_starts) {
  const int n = static_cast<int>(lo.size());
  double span = 0.0;
  for (int d = 0; d < n; ++d) span = std::max(span, hi[d] - lo[d]);

  Rng rng(cfg.seed);
  std::vector<std::vector<double>> starts = extra_starts;
  for (int s = 0; s < cfg.starts; ++s) {
    std::vector<double> x(n);
    for (int d = 0; d < n; ++d) x[d] = rng.uniform(lo[d], hi[d]);
    starts.push_back(std::move(x));
  }

  MultistartResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
    std::vector<double> x = starts[s];
    double val = nelder_mead(f, x, 0.25 * span, cfg.max_iters, cfg.ftol);
    for (double shrink : {0.02 * span, 0.002 * span}) {  // restart around the incumbent
      val = nelder_mead(f, x, shrink, cfg.max_iters, cfg.ftol);
    }
    if (val < best.value) {
      best.value = val;
      best.x = x;
      best.start_index = s;
    }
  }
  return best;
}

Mat2 rotation_from_angles(double t1, double t2, double t3) {
  const double c = std::cos(t1), s = std::sin(t1);
  Mat2 u;
  u(0, 0) = c * std::exp(cd(0.0, t2));
  u(0, 1) = s * std::exp(cd(0.0, t3));
  u(1, 0) = -s * std::exp(cd(0.0, -t3));
  u(1, 1) = c * std::exp(cd(0.0, -t2));
  return u;
}

PureState w_manifold_state(const std::vector<double>& p) {
  // p[0..2]: spherical magnitudes, p[3..11]: three rotation-angle triples.
  const double sa = std::sin(p[0]), ca = std::cos(p[0]);
  const double sb = std::sin(p[1]), cb = std::cos(p[1]);
  const double sc = std::sin(p[2]), cc = std::cos(p[2]);
  WGenParams gen;
  gen.lambda = {std::abs(ca), std::abs(sa * cb), std::abs(sa * sb * cc), std::abs(sa * sb * sc)};
  double n2 = 0.0;
  for (double l : gen.lambda) n2 += l * l;
  if (n2 < 1e-18) {
    gen.lambda = {1.0, 0.0, 0.0, 0.0};
  } else {
    const double inv = 1.0 / std::sqrt(n2);
    for (double& l : gen.lambda) l *= inv;
  }
  Vec8 amp = gen_w_type(gen).amp();
  amp = apply_local(rotation_from_angles(p[3], p[4], p[5]), Party::A, amp);
  amp = apply_local(rotation_from_angles(p[6], p[7], p[8]), Party::B, amp);
  amp = apply_local(rotation_from_angles(p[9], p[10], p[11]), Party::C, amp);
  return PureState::normalized(amp);
}

PureState max_ghz_overlap_w_state() {
  const double k = 1.0 / (2.0 * std::sqrt(6.0));
  Vec8 amp;
  amp << 3.0 * k, -k, -k, -k, -k, -k, -k, 3.0 * k;
  return PureState(amp);
}

BisepOverlap max_bisep_overlap(const PureState& psi) {
  BisepOverlap best;
  best.value = -1.0;
  for (Party x : kParties) {  // order fixes the tie-break
    const double top = eig2_hermitian(reduced_qubit(psi, x))[1];
    if (top > best.value) {
      best.value = top;
      best.partition = x;
    }
  }
  return best;
}

namespace {

// Best vector that is product across the given cut: (top eigenvector of the
// reduced matrix) tensor (the matching normalized co-factor of psi). Its
// squared overlap with psi is exactly the top reduced eigenvalue, and it has
// zero tangle.
PureState bisep_achiever(const PureState& psi, Party x) {
  const Mat2 red = reduced_qubit(psi, x);
  const auto ev = eig2_hermitian(red);
  const Mat2 shifted = red - ev[0] * Mat2::Identity();  // rank one, columns span the top eigenvector
  Vec2 e = shifted.col(0).norm() >= shifted.col(1).norm() ? shifted.col(0) : shifted.col(1);
  if (e.norm() < 1e-14) e << 1.0, 0.0;
  e.normalize();

  const int bit = party_bit(x);
  std::array<cd, 8> chi{};
  double chi_norm2 = 0.0;
  for (int rest = 0; rest < 8; ++rest) {
    if (rest & bit) continue;
    chi[rest] = std::conj(e(0)) * psi.amp(rest) + std::conj(e(1)) * psi.amp(rest | bit);
    chi_norm2 += std::norm(chi[rest]);
  }
  const double inv = 1.0 / std::sqrt(chi_norm2);

  Vec8 amp = Vec8::Zero();
  for (int rest = 0; rest < 8; ++rest) {
    if (rest & bit) continue;
    amp(rest) += e(0) * chi[rest] * inv;
    amp(rest | bit) += e(1) * chi[rest] * inv;
  }
  return PureState::normalized(amp);
}

}  // namespace

WOverlap max_w_overlap(const PureState& psi, const OptimizerConfig& cfg) {
  const ObjectiveFn objective = [&psi](const std::vector<double>& p) {
    const PureState cand = w_manifold_state(p);
    return -std::norm((psi.amp().adjoint() * cand.amp())(0));
  };

  const double pi = 3.14159265358979323846;
  std::vector<double> lo(12), hi(12);
  for (int d = 0; d < 3; ++d) {
    lo[d] = 0.0;
    hi[d] = 0.5 * pi;
  }
  for (int d = 3; d < 12; ++d) {
    lo[d] = -pi;
    hi[d] = pi;
  }

  const MultistartResult res = multistart_minimize(objective, lo, hi, cfg);
  WOverlap out{-res.value, w_manifold_state(res.x)};

  // Biseparable vectors are limits of the manifold, so their best overlap is
  // always attainable; fall back to it if the search came in below.
  const BisepOverlap floor = max_bisep_overlap(psi);
  if (out.value < floor.value) {
    out.value = floor.value;
    out.achiever = bisep_achiever(psi, floor.partition);
  }
  return out;
}

double symmetric_w_overlap_ghz(const SymmetricWParams& p) {
  if (std::abs(p.kappa0 * p.kappa0 + 3.0 * p.kappa1 * p.kappa1 - 1.0) > 1e-12) {
    throw std::invalid_argument("symmetric_w_overlap_ghz: kappa0^2 + 3 kappa1^2 must be 1");
  }
  if (std::abs(std::norm(p.alpha) + std::norm(p.beta) - 1.0) > 1e-12) {
    throw std::invalid_argument("symmetric_w_overlap_ghz: |alpha|^2 + |beta|^2 must be 1");
  }
  Mat2 r;
  r(0, 0) = p.alpha;
  r(1, 0) = p.beta;
  r(0, 1) = std::conj(p.beta);
  r(1, 1) = -std::conj(p.alpha);

  Vec8 amp = Vec8::Zero();
  amp(basis_index(0, 0, 0)) = p.kappa0;
  amp(basis_index(1, 0, 0)) = p.kappa1;
  amp(basis_index(0, 1, 0)) = p.kappa1;
  amp(basis_index(0, 0, 1)) = p.kappa1;
  for (Party x : kParties) amp = apply_local(r, x, amp);

  return std::norm((ghz_state().amp().adjoint() * amp)(0));
}

}  // namespace triwit
