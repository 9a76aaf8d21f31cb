#pragma once

#include <optional>
#include <string>

#include "triwit/pptedge.hpp"
#include "triwit/witness.hpp"

namespace triwit {

// Nested convex classes, S inside B inside W inside GHZ (= all states).
enum class MixedClass { S, B, W, GHZ };

int class_order(MixedClass c);
const char* class_name(MixedClass c);
std::optional<MixedClass> class_from_name(const std::string& name);

struct Certificate {
  enum class Kind {
    WitnessViolation,
    PptSignature,
    RankRule,
    ExplicitDecomposition,
    PureStateClass,
    KnownFamily
  };
  // LowerBound: the state is proven outside every class below `bound`.
  // UpperBound: the state is proven to lie inside `bound`. Info: recorded
  // evidence that implies no bound by itself.
  enum class Direction { LowerBound, UpperBound, Info };

  Kind kind;
  Direction direction = Direction::Info;
  MixedClass bound = MixedClass::GHZ;
  std::string label;
  double value = 0.0;
  std::vector<double> params;
};

const char* certificate_kind_name(Certificate::Kind k);
const char* certificate_direction_name(Certificate::Direction d);

struct ClassVerdict {
  MixedClass lower = MixedClass::S;   // smallest class the evidence still permits
  MixedClass upper = MixedClass::GHZ; // smallest class proven to contain the state
  std::vector<Certificate> evidence;
};

// Interval text such as "S", "B \\ S", or "[S, W]" when the bounds differ.
std::string verdict_class_string(const ClassVerdict& v);

// (1-p)/8 identity + p times the projector onto the zero-tangle vector with
// squared overlap 3/4 against the pair state.
DensityMatrix family_state(double p);

// The family's manifest convex parts: eight basis products plus the projector
// component. Claimable as W (or S when p = 0).
std::vector<WeightedState> family_state_decomposition(double p);

struct DetectionInterval {
  bool found = false;
  double p_lo = 0.0, p_hi = 0.0;
};

// Maximal parameter subinterval where the witness expectation is negative;
// endpoints from a uniform scan plus bisection to 1e-9.
DetectionInterval detection_interval(const Witness& w,
                                     const std::function<DensityMatrix(double)>& family,
                                     double p_min = 0.0, double p_max = 1.0, int steps = 1000);

DensityMatrix perturbed_family(double p, double eps, const DensityMatrix& sigma);

// (5p-3)/(5p+1): admissible perturbation weight against the worst direction.
// Domain p in (3/5, 1].
double robustness_bound(double p);

struct DecompositionCheck {
  bool ok = false;
  int offending_component = -1;
  std::string reason;
  Certificate cert;  // valid when ok
};

// Checks unit weight sum, reconstruction of rho within 1e-9 (max norm) and
// that every component's pure class is admitted by the claimed class.
DecompositionCheck verify_decomposition(const DensityMatrix& rho,
                                        const std::vector<WeightedState>& parts,
                                        MixedClass claimed, const Tolerances& tol = {});

std::optional<EdgeFamilyParams> recognize_edge_family(const DensityMatrix& rho);
std::optional<double> recognize_w_family(const DensityMatrix& rho);

struct SuppliedDecomposition {
  std::vector<WeightedState> parts;
  MixedClass claimed = MixedClass::GHZ;
};

// Certificate pipeline: purity routing to the pure classifier, partial
// transpose signature, witness battery with orbit refinement, the PPT rank
// rule, then supplied or recognized decompositions. Always returns a verdict.
ClassVerdict classify_mixed(const DensityMatrix& rho, const OptimizerConfig& cfg = {},
                            const Tolerances& tol = {},
                            const SuppliedDecomposition* supplied = nullptr);

// Explicit biseparable parts for iso/8-weight identity plus sigma, built from
// single-coherence vectors and phase-averaged corner families; throws when the
// diagonal margin is exhausted.
std::vector<WeightedState> isotropic_sigma_bisep_parts(double iso, double eps,
                                                       const DensityMatrix& sigma);

// Largest eps for which the explicit construction above stays feasible inside
// the p-family perturbation.
double bisep_floor(double p, const DensityMatrix& sigma);

struct WBallReport {
  double p = 0.0, delta = 0.0;
  int samples = 0;
  int certified = 0;     // witness violation plus verified decomposition
  double eps_min = 0.0, eps_max = 0.0;
  bool all_certified() const { return certified == samples; }
};

DensityMatrix random_density_matrix(Rng& rng, int rank = 8);

// Certifies a ball of perturbation directions around the family state as
// still lying strictly between the biseparable and zero-tangle hulls.
WBallReport w_ball_exhibit(double p, double delta, int samples = 100,
                           std::uint64_t seed = 42);

}  // namespace triwit
