#pragma once

#include "triwit/qcore.hpp"

namespace triwit {

// Canonical five-parameter generator: lambda0 |000> + lambda1 e^{i theta} |100>
// + lambda2 |101> + lambda3 |110> + lambda4 |111>.
struct GhzGenParams {
  std::array<double, 5> lambda{};
  double theta = 0.0;
};

// Zero-tangle generator: lambda0 |000> + lambda1 |100> + lambda2 |101>
// + lambda3 |110>.
struct WGenParams {
  std::array<double, 4> lambda{};
};

struct PureClass {
  enum Kind { Product, Bisep, Wtype, GHZtype };
  Kind kind = Product;
  Party partition = Party::A;  // meaningful only when kind == Bisep

  // certificate order: Product < Bisep < Wtype < GHZtype
  int order() const { return static_cast<int>(kind); }
  bool operator==(const PureClass& o) const {
    return kind == o.kind && (kind != Bisep || partition == o.partition);
  }
};

const char* pure_class_name(PureClass c);

PureState ghz_state();  // (|000> + |111>)/sqrt(2)
PureState w_state();    // (|100> + |010> + |001>)/sqrt(3)

PureState gen_ghz_type(const GhzGenParams& p);
PureState gen_w_type(const WGenParams& p);

// Degree-4 invariant of the amplitudes: d1 - 2 d2 + 4 d3. The tangle is four
// times its modulus.
cd hyperdeterminant(const Vec8& amp);

// In [0,1] for unit vectors; vanishes exactly on product, biseparable and
// W-type vectors and is invariant under local unitaries.
double tangle(const PureState& psi);

PureClass classify_pure(const PureState& psi, const Tolerances& tol = {});

struct ZeroTangleMix {
  cd alpha, beta;
  PureState mix;
};

// Finds a normalized combination alpha psi1 + beta psi2 with vanishing tangle.
// The combination's invariant is a quartic in beta/alpha whose roots come from
// companion-matrix eigenvalues; the root with the smallest post-hoc tangle
// wins (ties: smallest |beta/alpha|). Throws if psi1, psi2 are linearly
// dependent.
ZeroTangleMix zero_tangle_mix(const PureState& psi1, const PureState& psi2);

}  // namespace triwit
