#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "triwit/puretri.hpp"

namespace triwit {

struct OptimizerConfig {
  int starts = 64;
  int max_iters = 2000;
  double ftol = 1e-12;
  std::uint64_t seed = 42;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

// Nelder-Mead simplex descent; x holds the start and receives the best point.
double nelder_mead(const ObjectiveFn& f, std::vector<double>& x, double step, int max_iters,
                   double ftol);

struct MultistartResult {
  double value = 0.0;
  std::vector<double> x;
  int start_index = -1;
};

// Seeded uniform starts over a box plus optional caller-supplied starts (which
// run first); each start gets a few simplex restarts with shrinking step. Ties
// keep the earliest start, so results are reproducible.
MultistartResult multistart_minimize(const ObjectiveFn& f, const std::vector<double>& lo,
                                     const std::vector<double>& hi, const OptimizerConfig& cfg,
                                     const std::vector<std::vector<double>>& extra_starts = {});

// One-qubit rotation from three angles (global phase dropped):
// [[cos t1 e^{i t2}, sin t1 e^{i t3}], [-sin t1 e^{-i t3}, cos t1 e^{-i t2}]].
Mat2 rotation_from_angles(double t1, double t2, double t3);

// Zero-tangle manifold point: per-party rotations applied to the four-term
// generator with magnitudes taken from spherical coordinates (3 + 9 angles).
PureState w_manifold_state(const std::vector<double>& params);

// The symmetric zero-tangle vector with squared overlap 3/4 against the
// maximally entangled pair state: (3|000> - sum of the six middle basis
// states + 3|111>) / (2 sqrt(6)).
PureState max_ghz_overlap_w_state();

struct BisepOverlap {
  double value = 0.0;
  Party partition = Party::A;
};

// Largest squared Schmidt coefficient over the three bipartitions (exact; ties
// resolved A-BC < B-AC < C-AB).
BisepOverlap max_bisep_overlap(const PureState& psi);

struct WOverlap {
  double value = 0.0;
  PureState achiever;
};

// Maximal squared overlap with the zero-tangle manifold via multistart search
// over the 12-angle parametrization; a certified lower bound on the true
// maximum, never below max_bisep_overlap(psi) - 1e-9.
WOverlap max_w_overlap(const PureState& psi, const OptimizerConfig& cfg = {});

struct SymmetricWParams {
  double kappa0 = 0.0, kappa1 = 0.0;  // kappa0^2 + 3 kappa1^2 = 1
  cd alpha, beta;                     // |alpha|^2 + |beta|^2 = 1
};

// Squared overlap of the rotated symmetric generator
// kappa0|000> + kappa1(|100>+|010>+|001>) with the pair state, under the
// threefold rotation |0> -> alpha|0> + beta|1>, |1> -> beta*|0> - alpha*|1>.
double symmetric_w_overlap_ghz(const SymmetricWParams& p);

}  // namespace triwit
