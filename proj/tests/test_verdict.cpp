#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "triwit/verdict.hpp"

using namespace triwit;

namespace {

OptimizerConfig quick_cfg() {
  OptimizerConfig cfg;
  cfg.starts = 12;
  return cfg;
}

}  // namespace

TEST_CASE("family_state endpoints and witness value") {
  CHECK((family_state(0.0).mat() - Mat8::Identity() / 8.0).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix pure = family_state(1.0);
  CHECK((pure.mat() * pure.mat() - pure.mat()).cwiseAbs().maxCoeff() < 1e-12);
  const EigResult eig = eig_hermitian(pure.mat());
  CHECK(classify_pure(PureState::normalized(eig.vectors.col(7))).kind == PureClass::Wtype);

  CHECK(evaluate(std_witness(StdWitnessKind::W2), family_state(0.8)) ==
        doctest::Approx(-0.125).epsilon(1e-12));

  CHECK_THROWS_AS(family_state(1.5), std::invalid_argument);
  CHECK_THROWS_AS(family_state(-0.1), std::invalid_argument);
}

TEST_CASE("family_state projector overlaps the pair state at 3/4") {
  const Vec8 w = max_ghz_overlap_w_state().amp();
  CHECK(std::norm((ghz_state().amp().adjoint() * w)(0)) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(tangle(max_ghz_overlap_w_state()) < 1e-14);
}

TEST_CASE("family_state_decomposition verifies at the right class") {
  for (double p : {0.3, 0.8, 1.0}) {
    const auto parts = family_state_decomposition(p);
    const DecompositionCheck check = verify_decomposition(family_state(p), parts, MixedClass::W);
    CHECK(check.ok);
  }
  const DecompositionCheck iso =
      verify_decomposition(family_state(0.0), family_state_decomposition(0.0), MixedClass::S);
  CHECK(iso.ok);
}

TEST_CASE("detection_interval for the three standard witnesses") {
  const auto family = [](double p) { return family_state(p); };

  const DetectionInterval w2 =
      detection_interval(std_witness(StdWitnessKind::W2), family, 0.0, 1.0, 1000);
  REQUIRE(w2.found);
  CHECK(std::abs(w2.p_lo - 0.6) < 1e-9);
  CHECK(w2.p_hi == doctest::Approx(1.0));

  // the canonical three-term witness misses this family entirely: its vector
  // has squared overlap 1/8 with the family projector, giving the constant
  // value 2/3 - 1/8 = 13/24
  const DetectionInterval w1 =
      detection_interval(std_witness(StdWitnessKind::W1), family, 0.0, 1.0, 1000);
  CHECK_FALSE(w1.found);
  CHECK(evaluate(std_witness(StdWitnessKind::W1), family_state(0.5)) ==
        doctest::Approx(13.0 / 24.0).epsilon(1e-12));

  // the same boundary constant on the family's own vector detects from 13/21,
  // strictly later than the pair-projector boundary at 3/5
  const Witness w1_analog =
      projector_witness(2.0 / 3.0, max_ghz_overlap_w_state(), Boundary::BBoundary);
  const DetectionInterval w1a = detection_interval(w1_analog, family, 0.0, 1.0, 1000);
  REQUIRE(w1a.found);
  CHECK(std::abs(w1a.p_lo - 13.0 / 21.0) < 1e-9);
  CHECK(w1a.p_hi == doctest::Approx(1.0));
  CHECK(w1a.p_lo > w2.p_lo);

  const DetectionInterval ghz =
      detection_interval(std_witness(StdWitnessKind::GHZ), family, 0.0, 1.0, 1000);
  CHECK_FALSE(ghz.found);
}

TEST_CASE("the W1 analog on the family follows the trace algebra") {
  // projector boundary 2/3 on the same vector: value (13 - 21 p)/24
  const Witness w1a = projector_witness(2.0 / 3.0, max_ghz_overlap_w_state(), Boundary::BBoundary);
  for (double p : {0.0, 0.3, 13.0 / 21.0, 0.9}) {
    CHECK(evaluate(w1a, family_state(p)) == doctest::Approx((13.0 - 21.0 * p) / 24.0).epsilon(1e-12));
  }
}

TEST_CASE("perturbed_family identities") {
  Rng rng(3);
  const DensityMatrix sigma = random_density_matrix(rng);
  CHECK((perturbed_family(0.7, 0.0, sigma).mat() - family_state(0.7).mat()).cwiseAbs().maxCoeff() <
        1e-15);

  // sigma orthogonal to the pair projector: value (1-eps) base + eps/2
  Vec8 e1 = Vec8::Zero();
  e1(1) = 1.0;
  const DensityMatrix ortho = DensityMatrix::projector(PureState(e1));
  const Witness w2 = std_witness(StdWitnessKind::W2);
  for (double p : {0.7, 0.9}) {
    for (double eps : {0.05, 0.2}) {
      const double got = evaluate(w2, perturbed_family(p, eps, ortho));
      const double expect = (1.0 - eps) * (3.0 - 5.0 * p) / 8.0 + eps / 2.0;
      CHECK(std::abs(got - expect) < 1e-12);
    }
  }

  // the boundary case: p = 0.8, eps = bound = 1/5 sits exactly on zero
  CHECK(std::abs(evaluate(w2, perturbed_family(0.8, 0.2, ortho))) < 1e-12);

  CHECK_THROWS_AS(perturbed_family(0.5, 1.5, sigma), std::invalid_argument);
}

TEST_CASE("robustness_bound values and domain") {
  CHECK(robustness_bound(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(robustness_bound(0.8) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(robustness_bound(0.6 + 1e-9) < 1e-8);
  CHECK_THROWS_AS(robustness_bound(0.6), std::domain_error);
  CHECK_THROWS_AS(robustness_bound(0.5), std::domain_error);
}

TEST_CASE("verify_decomposition accepts the honest and rejects the dishonest") {
  // uniform mixture of the eight basis projectors
  std::vector<WeightedState> basis;
  for (int i = 0; i < 8; ++i) {
    Vec8 amp = Vec8::Zero();
    amp(i) = 1.0;
    basis.push_back({0.125, PureState(amp)});
  }
  CHECK(verify_decomposition(DensityMatrix::maximally_mixed(), basis, MixedClass::S).ok);

  // the family edge state with its constructive biseparable parts
  const EdgeFamilyParams p{2, 3, 7};
  const auto parts = edge_family_bisep_decomposition(p, Party::B);
  CHECK(verify_decomposition(edge_family(p), parts, MixedClass::B).ok);
  // a class claim below the component classes fails
  const DecompositionCheck tooLow = verify_decomposition(edge_family(p), parts, MixedClass::S);
  CHECK_FALSE(tooLow.ok);
  CHECK(tooLow.offending_component >= 0);

  // pure projector claimed biseparable fails on the component class
  const std::vector<WeightedState> proj{{1.0, max_ghz_overlap_w_state()}};
  const DecompositionCheck wrong = verify_decomposition(family_state(1.0), proj, MixedClass::B);
  CHECK_FALSE(wrong.ok);
  CHECK(wrong.offending_component == 0);

  // reconstruction mismatch
  const DecompositionCheck off = verify_decomposition(family_state(0.5), basis, MixedClass::S);
  CHECK_FALSE(off.ok);

  // weights must sum to one
  std::vector<WeightedState> short_parts(basis.begin(), basis.end() - 1);
  CHECK_FALSE(verify_decomposition(DensityMatrix::maximally_mixed(), short_parts, MixedClass::S).ok);
}

TEST_CASE("recognizers identify both families and reject others") {
  const auto ef = recognize_edge_family(edge_family({2, 3, 7}));
  REQUIRE(ef.has_value());
  CHECK(ef->a == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ef->b == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ef->c == doctest::Approx(7.0).epsilon(1e-12));

  const auto pw = recognize_w_family(family_state(0.8));
  REQUIRE(pw.has_value());
  CHECK(*pw == doctest::Approx(0.8).epsilon(1e-10));

  Rng rng(5);
  CHECK_FALSE(recognize_edge_family(DensityMatrix(oracle::random_density(rng))).has_value());
  CHECK_FALSE(recognize_w_family(DensityMatrix(oracle::random_density(rng))).has_value());
  CHECK_FALSE(recognize_edge_family(family_state(0.8)).has_value());
  // the maximally mixed state is the p=0 member
  CHECK(recognize_w_family(DensityMatrix::maximally_mixed()).has_value());
}

TEST_CASE("classify_mixed: pure reference states") {
  const ClassVerdict ghz = classify_mixed(DensityMatrix::projector(ghz_state()), quick_cfg());
  CHECK(ghz.lower == MixedClass::GHZ);
  CHECK(ghz.upper == MixedClass::GHZ);
  CHECK_FALSE(ghz.evidence.empty());
  // both the pure route and the witness battery certify the exclusion
  int witness_certs = 0;
  for (const Certificate& c : ghz.evidence) {
    if (c.kind == Certificate::Kind::WitnessViolation) ++witness_certs;
  }
  CHECK(witness_certs >= 2);  // both boundary constants are violated

  const ClassVerdict w = classify_mixed(DensityMatrix::projector(w_state()), quick_cfg());
  CHECK(w.lower == MixedClass::W);
  CHECK(w.upper == MixedClass::W);

  Vec8 e0 = Vec8::Zero();
  e0(0) = 1.0;
  const ClassVerdict s = classify_mixed(DensityMatrix::projector(PureState(e0)), quick_cfg());
  CHECK(s.lower == MixedClass::S);
  CHECK(s.upper == MixedClass::S);
}

TEST_CASE("classify_mixed: the mixing family with its decomposition") {
  SuppliedDecomposition supplied{family_state_decomposition(0.8), MixedClass::W};
  const ClassVerdict v = classify_mixed(family_state(0.8), quick_cfg(), {}, &supplied);
  CHECK(v.lower == MixedClass::W);
  CHECK(v.upper == MixedClass::W);
  CHECK(verdict_class_string(v) == "W \\ B");

  // the W2 violation value is part of the evidence
  bool saw_w2 = false;
  for (const Certificate& c : v.evidence) {
    if (c.kind == Certificate::Kind::WitnessViolation && c.label.substr(0, 2) == "W2") {
      saw_w2 = true;
      CHECK(c.value <= doctest::Approx(-0.125).epsilon(1e-9));
    }
  }
  CHECK(saw_w2);
}

TEST_CASE("classify_mixed: recognized edge family yields B minus S") {
  const ClassVerdict v = classify_mixed(edge_family({2, 3, 7}), quick_cfg());
  CHECK(v.lower == MixedClass::B);
  CHECK(v.upper == MixedClass::B);
  CHECK(verdict_class_string(v) == "B \\ S");

  bool family_cert = false, decomposition_cert = false;
  for (const Certificate& c : v.evidence) {
    if (c.kind == Certificate::Kind::KnownFamily &&
        c.direction == Certificate::Direction::LowerBound) {
      family_cert = true;
    }
    if (c.kind == Certificate::Kind::ExplicitDecomposition) decomposition_cert = true;
  }
  CHECK(family_cert);
  CHECK(decomposition_cert);
}

TEST_CASE("classify_mixed: maximally mixed state is certified separable") {
  const ClassVerdict v = classify_mixed(DensityMatrix::maximally_mixed(), quick_cfg());
  CHECK(v.lower == MixedClass::S);
  CHECK(v.upper == MixedClass::S);
}

TEST_CASE("classify_mixed: separable mixtures never trigger the battery") {
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    const DensityMatrix rho = sample_mixture(SampleClass::Separable, rng);
    const ClassVerdict v = classify_mixed(rho, quick_cfg());
    CHECK(v.lower == MixedClass::S);
    for (const Certificate& c : v.evidence) {
      CHECK(c.kind != Certificate::Kind::WitnessViolation);
    }
  }
}

TEST_CASE("classify_mixed: generic entangled projectors are certified outside W") {
  Rng rng(9);
  OptimizerConfig cfg;
  cfg.starts = 4;  // the pure route carries the certificate, the battery assists
  int tested = 0;
  while (tested < 100) {
    GhzGenParams p;
    double n2 = 0.0;
    for (double& l : p.lambda) {
      l = 0.2 + rng.uniform();
      n2 += l * l;
    }
    for (double& l : p.lambda) l /= std::sqrt(n2);
    p.theta = rng.uniform(0.0, 3.14159);
    const PureState psi = gen_ghz_type(p);
    if (tangle(psi) < 1e-3) continue;
    ++tested;
    const ClassVerdict v = classify_mixed(DensityMatrix::projector(psi), cfg);
    CHECK(v.lower == MixedClass::GHZ);
  }
}

TEST_CASE("classify_mixed rejects a dishonest supplied decomposition") {
  SuppliedDecomposition bad{family_state_decomposition(0.8), MixedClass::B};
  CHECK_THROWS_AS(classify_mixed(family_state(0.8), quick_cfg(), {}, &bad), std::invalid_argument);
}

TEST_CASE("verdict reduction is monotone in the evidence") {
  const ClassVerdict v = classify_mixed(edge_family({2, 3, 7}), quick_cfg());
  MixedClass lower = MixedClass::S;
  MixedClass upper = MixedClass::GHZ;
  for (const Certificate& c : v.evidence) {
    const MixedClass prev_lower = lower, prev_upper = upper;
    if (c.direction == Certificate::Direction::LowerBound &&
        class_order(c.bound) > class_order(lower)) {
      lower = c.bound;
    }
    if (c.direction == Certificate::Direction::UpperBound &&
        class_order(c.bound) < class_order(upper)) {
      upper = c.bound;
    }
    CHECK(class_order(lower) >= class_order(prev_lower));
    CHECK(class_order(upper) <= class_order(prev_upper));
    CHECK(class_order(lower) <= class_order(upper));
  }
  CHECK(lower == v.lower);
  CHECK(upper == v.upper);
}

TEST_CASE("isotropic_sigma_bisep_parts reproduces its target exactly") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix sigma = random_density_matrix(rng);
    const double p = 0.8;
    const double eps = 0.9 * std::min(robustness_bound(p), bisep_floor(p, sigma));
    const double iso = (1.0 - eps) * (1.0 - p);

    const auto parts = isotropic_sigma_bisep_parts(iso, eps, sigma);
    Mat8 rebuilt = Mat8::Zero();
    for (const WeightedState& ws : parts) {
      CHECK(ws.weight >= 0.0);
      rebuilt += ws.weight * (ws.state.amp() * ws.state.amp().adjoint());
      const PureClass pc = classify_pure(ws.state);
      CHECK(pc.order() <= 1);  // product or biseparable only
    }
    const Mat8 target = iso / 8.0 * Mat8::Identity() + eps * sigma.mat();
    CHECK((rebuilt - target).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("bisep_floor guards the diagonal margins") {
  Rng rng(13);
  const DensityMatrix sigma = random_density_matrix(rng);
  const double floor = bisep_floor(0.8, sigma);
  CHECK(floor > 0.0);
  CHECK(floor <= 1.0);
  // beyond the floor the construction must fail
  const double above = std::min(1.0, floor * 1.5);
  CHECK_THROWS_AS(isotropic_sigma_bisep_parts((1.0 - above) * 0.2, above, sigma),
                  std::invalid_argument);
}

TEST_CASE("w_ball_exhibit certifies every sampled direction") {
  const WBallReport rep = w_ball_exhibit(0.8, 0.1, 40, 42);
  CHECK(rep.samples == 40);
  CHECK(rep.certified == 40);
  CHECK(rep.all_certified());
  CHECK(rep.eps_min > 0.0);
  CHECK(rep.eps_max < robustness_bound(0.8));

  // narrow margin near the detection boundary still leaves a ball
  const WBallReport tight = w_ball_exhibit(0.61, 0.005, 10, 42);
  CHECK(tight.all_certified());
  CHECK(tight.eps_min > 0.0);

  CHECK_THROWS_AS(w_ball_exhibit(0.65, 0.1, 10, 42), std::invalid_argument);
}

TEST_CASE("above the robustness bound the worst direction escapes detection") {
  Vec8 e1 = Vec8::Zero();
  e1(1) = 1.0;
  const DensityMatrix ortho = DensityMatrix::projector(PureState(e1));
  const Witness w2 = std_witness(StdWitnessKind::W2);
  const double p = 0.8;
  const double bound = robustness_bound(p);
  CHECK(evaluate(w2, perturbed_family(p, 0.99 * bound, ortho)) < 0.0);
  CHECK(evaluate(w2, perturbed_family(p, 1.01 * bound, ortho)) > 0.0);
}
