#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "triwit/verdict.hpp"

using namespace triwit;

TEST_CASE("std_witness constants and generating projectors") {
  const Witness ghz = std_witness(StdWitnessKind::GHZ);
  CHECK(ghz.c == doctest::Approx(0.75));
  CHECK(ghz.boundary == Boundary::WBoundary);
  CHECK((ghz.proj.amp() - ghz_state().amp()).norm() < 1e-15);

  const Witness w1 = std_witness(StdWitnessKind::W1);
  CHECK(w1.c == doctest::Approx(2.0 / 3.0));
  CHECK(w1.boundary == Boundary::BBoundary);
  CHECK((w1.proj.amp() - w_state().amp()).norm() < 1e-15);

  const Witness w2 = std_witness(StdWitnessKind::W2);
  CHECK(w2.c == doctest::Approx(0.5));
  CHECK(w2.boundary == Boundary::BBoundary);

  // op = c 1 - P exactly
  const Mat8 expect = 0.75 * Mat8::Identity() - ghz_state().amp() * ghz_state().amp().adjoint();
  CHECK((ghz.op - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ghz.op - ghz.op.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("projector_witness equals the named constructions and validates c") {
  const Witness w2 = projector_witness(0.5, ghz_state(), Boundary::BBoundary);
  CHECK((w2.op - std_witness(StdWitnessKind::W2).op).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(projector_witness(1.5, ghz_state(), Boundary::BBoundary), std::invalid_argument);
  CHECK_THROWS_AS(projector_witness(0.0, ghz_state(), Boundary::BBoundary), std::invalid_argument);
}

TEST_CASE("evaluate reference values") {
  CHECK(evaluate(std_witness(StdWitnessKind::W2), DensityMatrix::maximally_mixed()) ==
        doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(evaluate(std_witness(StdWitnessKind::GHZ), DensityMatrix::projector(ghz_state())) ==
        doctest::Approx(-0.25).epsilon(1e-14));

  for (double p : {0.1, 0.5, 0.6, 0.8, 1.0}) {
    CHECK(evaluate(std_witness(StdWitnessKind::W2), family_state(p)) ==
          doctest::Approx((3.0 - 5.0 * p) / 8.0).epsilon(1e-12));
  }
}

TEST_CASE("evaluate equals the full operator trace") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = DensityMatrix(oracle::random_density(rng));
    const Witness w = std_witness(StdWitnessKind::GHZ);
    const double direct = (w.op * rho.mat()).trace().real();
    CHECK(evaluate(w, rho) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("evaluate is linear in the state") {
  Rng rng(5);
  const Witness w = std_witness(StdWitnessKind::W1);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix r1 = DensityMatrix(oracle::random_density(rng));
    const DensityMatrix r2 = DensityMatrix(oracle::random_density(rng));
    const double t = rng.uniform();
    const DensityMatrix mix = DensityMatrix(Mat8(t * r1.mat() + (1.0 - t) * r2.mat()));
    CHECK(std::abs(evaluate(w, mix) - (t * evaluate(w, r1) + (1.0 - t) * evaluate(w, r2))) <
          1e-12);
  }
}

TEST_CASE("evaluate is covariant under joint local rotations") {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = DensityMatrix(oracle::random_density(rng));
    const Mat2 ua = haar_qubit_unitary(rng), ub = haar_qubit_unitary(rng),
               uc = haar_qubit_unitary(rng);
    const Mat8 u = kron3(ua, ub, uc);

    const Witness base = std_witness(StdWitnessKind::W1);
    const Witness rotated =
        projector_witness(base.c, PureState::normalized(u * base.proj.amp()), base.boundary);
    const DensityMatrix rho_rot = DensityMatrix(Mat8(u * rho.mat() * u.adjoint()));
    CHECK(std::abs(evaluate(rotated, rho_rot) - evaluate(base, rho)) < 1e-10);
  }

  // rotated generator against the equally rotated projector state: c - 1
  Rng rng2(8);
  const Mat2 ua = haar_qubit_unitary(rng2), ub = haar_qubit_unitary(rng2),
             uc = haar_qubit_unitary(rng2);
  const Mat8 u = kron3(ua, ub, uc);
  const PureState wrot = PureState::normalized(u * w_state().amp());
  const Witness w = projector_witness(2.0 / 3.0, wrot, Boundary::BBoundary);
  CHECK(evaluate(w, DensityMatrix::projector(wrot)) ==
        doctest::Approx(2.0 / 3.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("validate_canonical checks the kernel dimension per boundary") {
  // Q = 1 - P_pair: kernel is the pair state alone
  CanonicalWitnessParts parts;
  parts.q = Mat8::Identity() - ghz_state().amp() * ghz_state().amp().adjoint();
  parts.eps = 0.25;
  const CanonicalReport ghz_rep = validate_canonical(parts, Boundary::WBoundary);
  CHECK(ghz_rep.q_psd);
  CHECK(ghz_rep.eps_positive);
  CHECK(ghz_rep.q_kernel_dim == 1);
  CHECK(ghz_rep.kernel_ok);
  CHECK(ghz_rep.pass());

  // the same split also passes the weaker B-boundary condition k(Q) < 4
  CHECK(validate_canonical(parts, Boundary::BBoundary).pass());

  // a four-dimensional kernel fails the B-boundary condition
  CanonicalWitnessParts wide;
  wide.q = Mat8::Zero();
  for (int i = 0; i < 4; ++i) wide.q(i, i) = 1.0;
  wide.eps = 0.1;
  const CanonicalReport wide_rep = validate_canonical(wide, Boundary::BBoundary);
  CHECK(wide_rep.q_kernel_dim == 4);
  CHECK_FALSE(wide_rep.kernel_ok);
  CHECK_FALSE(wide_rep.pass());

  CanonicalWitnessParts nonpsd;
  nonpsd.q = -Mat8::Identity();
  nonpsd.eps = 0.0;
  const CanonicalReport bad = validate_canonical(nonpsd, Boundary::WBoundary);
  CHECK_FALSE(bad.q_psd);
  CHECK_FALSE(bad.eps_positive);
}

TEST_CASE("optimize_violation on isotropic and projector states") {
  OptimizerConfig cfg;
  cfg.starts = 24;

  // orbit-independent on the maximally mixed state
  const ViolationResult iso =
      optimize_violation(DensityMatrix::maximally_mixed(), std_witness(StdWitnessKind::W2), cfg);
  CHECK(iso.value == doctest::Approx(3.0 / 8.0).epsilon(1e-9));

  // the pair projector reaches c - 1 at the identity rotation
  const ViolationResult ghz =
      optimize_violation(DensityMatrix::projector(ghz_state()), std_witness(StdWitnessKind::W2), cfg);
  CHECK(ghz.value == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("optimize_violation recovers a hidden rotation") {
  Rng rng(11);
  OptimizerConfig cfg;
  cfg.starts = 24;
  const Mat8 u = kron3(haar_qubit_unitary(rng), haar_qubit_unitary(rng), haar_qubit_unitary(rng));
  const DensityMatrix rotated =
      DensityMatrix::projector(PureState::normalized(u * ghz_state().amp()));
  const ViolationResult res = optimize_violation(rotated, std_witness(StdWitnessKind::W2), cfg);
  CHECK(std::abs(res.value - (-0.5)) < 1e-6);
}

TEST_CASE("optimize_violation never exceeds the plain evaluation") {
  Rng rng(13);
  OptimizerConfig cfg;
  cfg.starts = 8;
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = DensityMatrix(oracle::random_density(rng));
    for (StdWitnessKind kind : {StdWitnessKind::W1, StdWitnessKind::W2, StdWitnessKind::GHZ}) {
      const Witness w = std_witness(kind);
      CHECK(optimize_violation(rho, w, cfg).value <= evaluate(w, rho) + 1e-12);
    }
  }
}

TEST_CASE("sampled pure vectors land in their advertised classes") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    CHECK(classify_pure(sample_product_vector(rng)).kind == PureClass::Product);
    const PureClass pb = classify_pure(sample_bisep_vector(Party::B, rng));
    CHECK(pb.kind == PureClass::Bisep);
    CHECK(pb.partition == Party::B);
    CHECK(tangle(sample_w_type_vector(rng)) <= 1e-12);
  }
}

TEST_CASE("witness nonnegativity on honest class mixtures") {
  Rng rng(19);
  const Witness w1 = std_witness(StdWitnessKind::W1);
  const Witness w2 = std_witness(StdWitnessKind::W2);
  const Witness ghz = std_witness(StdWitnessKind::GHZ);

  double min_b = 1.0, min_w = 1.0;
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix rho_b = sample_mixture(SampleClass::Biseparable, rng);
    min_b = std::min({min_b, evaluate(w1, rho_b), evaluate(w2, rho_b)});

    const DensityMatrix rho_w = sample_mixture(SampleClass::Wclass, rng);
    min_w = std::min(min_w, evaluate(ghz, rho_w));
  }
  CHECK(min_b >= -1e-9);
  CHECK(min_w >= -1e-9);
}

TEST_CASE("separable mixtures stay positive under every partial transpose") {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = sample_mixture(SampleClass::Separable, rng);
    const PptSignature sig = ppt_signature(rho);
    CHECK(sig.all());
  }
}
