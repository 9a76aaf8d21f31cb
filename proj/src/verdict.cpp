#include "triwit/verdict.hpp"

#include <bit>
#include <cmath>

namespace triwit {

namespace {

constexpr double kViolationTol = 1e-8;  // witness value below -this certifies exclusion

double max_abs_diff(const Mat8& x, const Mat8& y) { return (x - y).cwiseAbs().maxCoeff(); }

}  // namespace

int class_order(MixedClass c) { return static_cast<int>(c); }

const char* class_name(MixedClass c) {
  switch (c) {
    case MixedClass::S: return "S";
    case MixedClass::B: return "B";
    case MixedClass::W: return "W";
    default: return "GHZ";
  }
}

std::optional<MixedClass> class_from_name(const std::string& name) {
  if (name == "S") return MixedClass::S;
  if (name == "B") return MixedClass::B;
  if (name == "W") return MixedClass::W;
  if (name == "GHZ") return MixedClass::GHZ;
  return std::nullopt;
}

const char* certificate_kind_name(Certificate::Kind k) {
  switch (k) {
    case Certificate::Kind::WitnessViolation: return "WitnessViolation";
    case Certificate::Kind::PptSignature: return "PptSignature";
    case Certificate::Kind::RankRule: return "RankRule";
    case Certificate::Kind::ExplicitDecomposition: return "ExplicitDecomposition";
    case Certificate::Kind::PureStateClass: return "PureStateClass";
    default: return "KnownFamily";
  }
}

const char* certificate_direction_name(Certificate::Direction d) {
  switch (d) {
    case Certificate::Direction::LowerBound: return "lower";
    case Certificate::Direction::UpperBound: return "upper";
    default: return "info";
  }
}

std::string verdict_class_string(const ClassVerdict& v) {
  if (v.lower == v.upper) {
    if (v.lower == MixedClass::S) return "S";
    return std::string(class_name(v.lower)) + " \\ " +
           class_name(static_cast<MixedClass>(class_order(v.lower) - 1));
  }
  return std::string("[") + class_name(v.lower) + ", " + class_name(v.upper) + "]";
}

DensityMatrix family_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("family parameter must lie in [0,1]");
  const Vec8 w = max_ghz_overlap_w_state().amp();
  Mat8 m = ((1.0 - p) / 8.0) * Mat8::Identity() + p * (w * w.adjoint());
  return DensityMatrix(m);
}

std::vector<WeightedState> family_state_decomposition(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("family parameter must lie in [0,1]");
  std::vector<WeightedState> parts;
  if ((1.0 - p) > 0.0) {
    for (int i = 0; i < 8; ++i) {
      Vec8 amp = Vec8::Zero();
      amp(i) = 1.0;
      parts.push_back({(1.0 - p) / 8.0, PureState(amp)});
    }
  }
  if (p > 0.0) parts.push_back({p, max_ghz_overlap_w_state()});
  return parts;
}

DetectionInterval detection_interval(const Witness& w,
                                     const std::function<DensityMatrix(double)>& family,
                                     double p_min, double p_max, int steps) {
  if (!(p_min < p_max) || steps < 2) throw std::invalid_argument("bad scan range");
  const auto value_at = [&](double p) { return evaluate(w, family(p)); };

  std::vector<double> ps(steps + 1), vs(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    ps[i] = p_min + (p_max - p_min) * i / steps;
    vs[i] = value_at(ps[i]);
  }

  const auto bisect = [&](double lo, double hi) {
    // keeps the invariant: exactly one endpoint negative
    bool lo_neg = value_at(lo) < 0.0;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      if ((value_at(mid) < 0.0) == lo_neg) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  // longest negative run
  int best_i = -1, best_j = -1;
  int i = 0;
  while (i <= steps) {
    if (vs[i] < 0.0) {
      int j = i;
      while (j + 1 <= steps && vs[j + 1] < 0.0) ++j;
      if (best_i < 0 || ps[j] - ps[i] > ps[best_j] - ps[best_i]) {
        best_i = i;
        best_j = j;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  if (best_i < 0) return {};

  DetectionInterval out;
  out.found = true;
  out.p_lo = best_i == 0 ? p_min : bisect(ps[best_i - 1], ps[best_i]);
  out.p_hi = best_j == steps ? p_max : bisect(ps[best_j], ps[best_j + 1]);
  return out;
}

DensityMatrix perturbed_family(double p, double eps, const DensityMatrix& sigma) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0,1]");
  return DensityMatrix(
      Mat8((1.0 - eps) * family_state(p).mat() + eps * sigma.mat()));
}

double robustness_bound(double p) {
  if (!(p > 0.6 && p <= 1.0)) {
    throw std::domain_error("robustness bound defined for p in (3/5, 1]");
  }
  return (5.0 * p - 3.0) / (5.0 * p + 1.0);
}

DecompositionCheck verify_decomposition(const DensityMatrix& rho,
                                        const std::vector<WeightedState>& parts,
                                        MixedClass claimed, const Tolerances& tol) {
  DecompositionCheck out;
  double wsum = 0.0;
  Mat8 rebuilt = Mat8::Zero();
  for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
    if (parts[i].weight < -1e-12) {
      out.offending_component = i;
      out.reason = "negative weight";
      return out;
    }
    wsum += parts[i].weight;
    rebuilt += parts[i].weight * (parts[i].state.amp() * parts[i].state.amp().adjoint());
  }
  if (std::abs(wsum - 1.0) > 1e-9) {
    out.reason = "weights sum to " + std::to_string(wsum);
    return out;
  }
  const double err = max_abs_diff(rebuilt, rho.mat());
  if (err > 1e-9) {
    out.reason = "reconstruction error " + std::to_string(err);
    return out;
  }
  for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
    const PureClass pc = classify_pure(parts[i].state, tol);
    if (pc.order() > class_order(claimed)) {
      out.offending_component = i;
      out.reason = std::string("component is ") + pure_class_name(pc);
      return out;
    }
  }
  out.ok = true;
  out.cert = {Certificate::Kind::ExplicitDecomposition, Certificate::Direction::UpperBound,
              claimed, "decomposition(" + std::to_string(parts.size()) + " parts)", err, {}};
  return out;
}

std::optional<EdgeFamilyParams> recognize_edge_family(const DensityMatrix& rho) {
  const Mat8& m = rho.mat();
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      if (i == 0 && j == 7) continue;
      if (std::abs(m(i, j)) > 1e-10) return std::nullopt;
    }
  }
  const cd corner = m(0, 7);
  const double d0 = m(0, 0).real();
  if (d0 < 1e-6) return std::nullopt;
  if (std::abs(corner - cd(d0, 0.0)) > 1e-10) return std::nullopt;
  if (std::abs(m(7, 7).real() - d0) > 1e-10) return std::nullopt;
  const double a = m(1, 1).real() / d0;
  const double b = m(2, 2).real() / d0;
  const double c = m(3, 3).real() / d0;
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) return std::nullopt;
  const EdgeFamilyParams params(a, b, c);
  if (max_abs_diff(edge_family(params).mat(), m) > 1e-9) return std::nullopt;
  return params;
}

std::optional<double> recognize_w_family(const DensityMatrix& rho) {
  const EigResult eig = eig_hermitian(rho.mat());
  double p = 1.0 - 8.0 * eig.values[0];
  p = std::min(1.0, std::max(0.0, p));
  if (max_abs_diff(family_state(p).mat(), rho.mat()) > 1e-9) return std::nullopt;
  return p;
}

ClassVerdict classify_mixed(const DensityMatrix& rho, const OptimizerConfig& cfg,
                            const Tolerances& tol, const SuppliedDecomposition* supplied) {
  ClassVerdict verdict;
  auto& ev = verdict.evidence;

  // (i) nearly pure states route through the pure classifier
  const double purity = (rho.mat() * rho.mat()).trace().real();
  if (purity > 1.0 - 1e-10) {
    const EigResult eig = eig_hermitian(rho.mat());
    const PureState psi = PureState::normalized(eig.vectors.col(7));
    const PureClass pc = classify_pure(psi, tol);
    const MixedClass cls = static_cast<MixedClass>(pc.order());
    ev.push_back({Certificate::Kind::PureStateClass, Certificate::Direction::LowerBound, cls,
                  pure_class_name(pc), purity, {}});
    ev.push_back({Certificate::Kind::PureStateClass, Certificate::Direction::UpperBound, cls,
                  pure_class_name(pc), purity, {}});
  }

  // (ii) partial transposes: any negative one certifies entanglement
  const PptSignature sig = ppt_signature(rho, tol);
  ev.push_back({Certificate::Kind::PptSignature,
                sig.all() ? Certificate::Direction::Info : Certificate::Direction::LowerBound,
                MixedClass::B,
                std::string("ppt(") + (sig.pptA ? "A" : "-") + (sig.pptB ? "B" : "-") +
                    (sig.pptC ? "C" : "-") + ")",
                0.0,
                {sig.pptA ? 1.0 : 0.0, sig.pptB ? 1.0 : 0.0, sig.pptC ? 1.0 : 0.0}});

  // (iii) witness battery with orbit refinement; the plain evaluation and the
  // rotated-projector search certify independently
  for (StdWitnessKind kind : {StdWitnessKind::W1, StdWitnessKind::W2, StdWitnessKind::GHZ}) {
    const Witness w = std_witness(kind);
    const MixedClass bound = w.boundary == Boundary::BBoundary ? MixedClass::W : MixedClass::GHZ;
    const double plain = evaluate(w, rho);
    if (plain < -kViolationTol) {
      ev.push_back({Certificate::Kind::WitnessViolation, Certificate::Direction::LowerBound,
                    bound, std_witness_name(kind), plain, {}});
    }
    const double refined = optimize_violation(rho, w, cfg).value;
    if (refined < -kViolationTol && refined < plain - 1e-12) {
      ev.push_back({Certificate::Kind::WitnessViolation, Certificate::Direction::LowerBound,
                    bound, std::string(std_witness_name(kind)) + "-orbit", refined, {plain}});
    }
  }

  // (iv) PPT with rank at most 4 forces biseparability
  const RankSignature ranks = rank_signature(rho, tol);
  if (sig.all() && ranks.r <= 4) {
    ev.push_back({Certificate::Kind::RankRule, Certificate::Direction::UpperBound, MixedClass::B,
                  "ppt-rank<=4", static_cast<double>(ranks.r),
                  {static_cast<double>(ranks.r), static_cast<double>(ranks.rA),
                   static_cast<double>(ranks.rB), static_cast<double>(ranks.rC)}});
  }

  // (v) supplied decomposition
  if (supplied != nullptr) {
    const DecompositionCheck check = verify_decomposition(rho, supplied->parts, supplied->claimed, tol);
    if (!check.ok) {
      throw std::invalid_argument("supplied decomposition rejected: " + check.reason +
                                  (check.offending_component >= 0
                                       ? " (component " + std::to_string(check.offending_component) + ")"
                                       : ""));
    }
    ev.push_back(check.cert);
  }

  // recognized families carry their own constructions
  if (const auto ef = recognize_edge_family(rho)) {
    const bool analytic_edge = edge_family_is_edge(*ef, tol);
    const EdgeVerdict search = product_in_ranges_search(rho, cfg, tol);
    ev.push_back({Certificate::Kind::KnownFamily,
                  (analytic_edge && search.is_edge) ? Certificate::Direction::LowerBound
                                                    : Certificate::Direction::Info,
                  MixedClass::B, "corner-diagonal-family", search.residual,
                  {ef->a, ef->b, ef->c, analytic_edge ? 1.0 : 0.0}});
    for (Party x : kParties) {
      const auto parts = edge_family_bisep_decomposition(*ef, x);
      const DecompositionCheck check = verify_decomposition(rho, parts, MixedClass::B, tol);
      if (check.ok) {
        Certificate cert = check.cert;
        cert.label = std::string("bisep-decomposition(") + partition_name(x) + ")";
        ev.push_back(cert);
      }
    }
  }
  if (const auto pw = recognize_w_family(rho)) {
    const MixedClass claimed = *pw > tol.zero_tol ? MixedClass::W : MixedClass::S;
    const DecompositionCheck check =
        verify_decomposition(rho, family_state_decomposition(*pw), claimed, tol);
    if (check.ok) {
      ev.push_back({Certificate::Kind::KnownFamily, Certificate::Direction::UpperBound, claimed,
                    "isotropic-plus-projector", *pw, {*pw}});
      ev.push_back(check.cert);
    }
  }

  for (const Certificate& cert : ev) {
    if (cert.direction == Certificate::Direction::LowerBound &&
        class_order(cert.bound) > class_order(verdict.lower)) {
      verdict.lower = cert.bound;
    }
    if (cert.direction == Certificate::Direction::UpperBound &&
        class_order(cert.bound) < class_order(verdict.upper)) {
      verdict.upper = cert.bound;
    }
  }
  if (class_order(verdict.lower) > class_order(verdict.upper)) {
    throw numeric_error("inconsistent certificates: lower bound exceeds upper bound");
  }
  return verdict;
}

std::vector<WeightedState> isotropic_sigma_bisep_parts(double iso, double eps,
                                                       const DensityMatrix& sigma) {
  const Mat8& s = sigma.mat();
  std::array<double, 8> margin{};
  for (int d = 0; d < 8; ++d) margin[d] = iso / 8.0 + eps * s(d, d).real();

  std::vector<WeightedState> parts;

  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      const cd z = eps * s(i, j);
      const double az = std::abs(z);
      if (az <= 1e-15) continue;
      const int flips = std::popcount(static_cast<unsigned>(i ^ j));
      if (flips <= 2) {
        // single vector carrying the coherence; product across the agreeing
        // qubit(s)
        Vec8 amp = Vec8::Zero();
        amp(i) = 1.0 / std::sqrt(2.0);
        amp(j) = std::conj(z) / az / std::sqrt(2.0);
        parts.push_back({2.0 * az, PureState(amp)});
        margin[i] -= az;
        margin[j] -= az;
      } else {
        // complementary pair: phase-averaged family product across A-BC
        const int fa = i ^ 4;   // flip A
        const int fbc = i ^ 3;  // flip B and C
        const cd nu = std::conj(z) / az;
        const int n_phases = 4;
        for (int k = 0; k < n_phases; ++k) {
          const double phi = 2.0 * 3.14159265358979323846 * k / n_phases;
          Vec8 amp = Vec8::Zero();
          amp(i) = 0.5;
          amp(fa) = 0.5 * std::exp(cd(0.0, phi));
          amp(fbc) = 0.5 * nu * std::exp(cd(0.0, -phi));
          amp(j) = 0.5 * nu;
          parts.push_back({4.0 * az / n_phases, PureState(amp)});
        }
        margin[i] -= az;
        margin[j] -= az;
        margin[fa] -= az;
        margin[fbc] -= az;
      }
    }
  }

  for (int d = 0; d < 8; ++d) {
    if (margin[d] < -1e-12) {
      throw std::invalid_argument("diagonal margin exhausted at basis state " + std::to_string(d));
    }
    if (margin[d] > 1e-16) {
      Vec8 amp = Vec8::Zero();
      amp(d) = 1.0;
      parts.push_back({margin[d], PureState(amp)});
    }
  }
  return parts;
}

double bisep_floor(double p, const DensityMatrix& sigma) {
  const Mat8& s = sigma.mat();
  const double iso_share = (1.0 - p) / 8.0;
  double floor = 1.0;
  for (int d = 0; d < 8; ++d) {
    double load = 0.0;
    for (int j = 0; j < 8; ++j) {
      if (j != d) load += std::abs(s(d, j));
    }
    load += std::abs(s(d ^ 4, d ^ 3));  // cross position of one complementary pair
    const double drain = load - s(d, d).real();
    if (drain > 0.0) floor = std::min(floor, iso_share / (iso_share + drain));
  }
  return floor;
}

DensityMatrix random_density_matrix(Rng& rng, int rank) {
  Eigen::MatrixXcd g(8, rank);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = cd(rng.normal(), rng.normal());
  Mat8 m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(Mat8(0.5 * (m + m.adjoint())));
}

WBallReport w_ball_exhibit(double p, double delta, int samples, std::uint64_t seed) {
  if (!(p - 0.6 > delta) || !(1.0 - p > delta)) {
    throw std::invalid_argument("need p - 3/5 > delta and 1 - p > delta");
  }

  const Witness w2 = std_witness(StdWitnessKind::W2);
  const double guard = robustness_bound(p);
  const PureState wvec = max_ghz_overlap_w_state();

  WBallReport report;
  report.p = p;
  report.delta = delta;
  report.samples = samples;
  report.eps_min = 1.0;
  report.eps_max = 0.0;

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const DensityMatrix sigma = random_density_matrix(rng);
    const double eps = 0.9 * std::min(guard, bisep_floor(p, sigma));
    report.eps_min = std::min(report.eps_min, eps);
    report.eps_max = std::max(report.eps_max, eps);

    const DensityMatrix rhot = perturbed_family(p, eps, sigma);
    const bool violated = evaluate(w2, rhot) < 0.0;

    std::vector<WeightedState> parts = isotropic_sigma_bisep_parts((1.0 - eps) * (1.0 - p), eps, sigma);
    parts.push_back({(1.0 - eps) * p, wvec});
    const DecompositionCheck check = verify_decomposition(rhot, parts, MixedClass::W, {});

    if (violated && check.ok) ++report.certified;
  }
  return report;
}

}  // namespace triwit
