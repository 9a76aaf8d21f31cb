#pragma once

#include "triwit/overlap.hpp"
#include "triwit/rng.hpp"

namespace triwit {

// B-boundary operators separate the biseparable hull (negative expectation
// certifies a state outside B); W-boundary operators separate the zero-tangle
// hull.
enum class Boundary { BBoundary, WBoundary };

const char* boundary_name(Boundary b);

struct Witness {
  Mat8 op;         // c * identity - |proj><proj|
  Boundary boundary;
  double c = 0.0;  // boundary constant
  PureState proj;
};

enum class StdWitnessKind { GHZ, W1, W2 };

// GHZ: 3/4 1 - P_ghz (W-boundary); W1: 2/3 1 - P_w (B-boundary);
// W2: 1/2 1 - P_ghz (B-boundary). The constants are the maximal squared
// overlaps of the generating vector with the class being separated.
Witness std_witness(StdWitnessKind kind);
const char* std_witness_name(StdWitnessKind kind);

Witness projector_witness(double c, const PureState& psi, Boundary boundary);

// Tr(w.op rho) = c - <proj|rho|proj>.
double evaluate(const Witness& w, const DensityMatrix& rho);

struct CanonicalWitnessParts {
  Mat8 q;           // positive operator
  double eps = 0.0;
};

struct CanonicalReport {
  bool q_psd = false;
  bool eps_positive = false;
  bool kernel_ok = false;  // k(Q) == 1 for W-boundary, k(Q) < 4 for B-boundary
  int q_kernel_dim = 0;
  bool pass() const { return q_psd && eps_positive && kernel_ok; }
};

CanonicalReport validate_canonical(const CanonicalWitnessParts& parts, Boundary boundary,
                                   const Tolerances& tol = {});

struct ViolationResult {
  double value = 0.0;
  std::array<double, 9> angles{};  // three rotation triples applied to proj
};

// Minimum of Tr((c 1 - U|proj><proj|U^dag) rho) over per-party rotations,
// found by seeded multistart search; never above the unrotated evaluation.
ViolationResult optimize_violation(const DensityMatrix& rho, const Witness& base,
                                   const OptimizerConfig& cfg = {});

// --- samplers for the nonnegativity property suites ---

enum class SampleClass { Separable, Biseparable, Wclass };

Mat2 haar_qubit_unitary(Rng& rng);
Vec2 random_qubit(Rng& rng);
PureState sample_product_vector(Rng& rng);
PureState sample_bisep_vector(Party cut, Rng& rng);
PureState sample_w_type_vector(Rng& rng);

// 1..8 components of the allowed pure kinds with Dirichlet-uniform weights.
DensityMatrix sample_mixture(SampleClass cls, Rng& rng);

}  // namespace triwit
