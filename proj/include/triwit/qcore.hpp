#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace triwit {

using cd = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
using Vec8 = Eigen::Matrix<cd, 8, 1>;
using Mat8 = Eigen::Matrix<cd, 8, 8>;

// Thrown when an iterative routine cannot meet its tolerance contract.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Qubit A is most significant in the basis index 4*iA + 2*iB + iC, so the
// computational basis reads {000,001,010,011,100,101,110,111}.
enum class Party { A, B, C };
inline constexpr std::array<Party, 3> kParties{Party::A, Party::B, Party::C};

const char* party_name(Party x);      // "A", "B", "C"
const char* partition_name(Party x);  // "A-BC", "B-AC", "C-AB"
int party_bit(Party x);               // bit mask in the basis index: A->4, B->2, C->1

constexpr int basis_index(int ia, int ib, int ic) { return 4 * ia + 2 * ib + ic; }

struct Tolerances {
  double psd_tol = 1e-9;       // eigenvalue floor accepted as "positive"
  double rank_rel_tol = 1e-8;  // relative eigenvalue cutoff for rank decisions
  double zero_tol = 1e-10;     // generic scalar zero test
};

// Unit-norm three-qubit vector.
class PureState {
 public:
  explicit PureState(const Vec8& amp);           // requires |norm^2 - 1| <= 1e-12
  static PureState normalized(const Vec8& raw);  // rescales; rejects the zero vector

  const Vec8& amp() const { return amp_; }
  cd amp(int i) const { return amp_(i); }

 private:
  Vec8 amp_;
};

// Hermitian, unit-trace, positive-semidefinite 8x8 matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat8& m);
  static DensityMatrix projector(const PureState& psi);
  static DensityMatrix maximally_mixed();

  const Mat8& mat() const { return m_; }

 private:
  Mat8 m_;
};

struct RankSignature {
  int r = 0, rA = 0, rB = 0, rC = 0;
  int sum() const { return r + rA + rB + rC; }
};

struct EigResult {
  std::array<double, 8> values;  // ascending
  Mat8 vectors;                  // orthonormal columns, matching order
};

struct RankKernel {
  int rank = 0;
  std::vector<Vec8> kernel;  // orthonormal basis of the numerical kernel
};

// Normalized tensor product a (x) b (x) c. Throws on a zero-norm factor.
PureState product_vector(const Vec2& a, const Vec2& b, const Vec2& c);

Mat8 kron3(const Mat2& a, const Mat2& b, const Mat2& c);

// Applies a one-qubit operator to the given party of an 8-component vector.
Vec8 apply_local(const Mat2& u, Party x, const Vec8& v);

// Transposes the indices of party x only. Involution; preserves trace and
// Hermiticity.
Mat8 partial_transpose(const Mat8& m, Party x);

// Single-party reduced 2x2 matrix (other two parties traced out).
Mat2 reduced_qubit(const Mat8& rho, Party x);
Mat2 reduced_qubit(const PureState& psi, Party x);

// Eigenvalues of a 2x2 Hermitian matrix, ascending (closed form).
std::array<double, 2> eig2_hermitian(const Mat2& m);

// Full eigendecomposition via cyclic Jacobi rotations. Eigenvalues ascending;
// each eigenvector's largest-magnitude component is made real nonnegative so
// results are reproducible. Throws on non-Hermitian input.
EigResult eig_hermitian(const Mat8& m);

double min_eigenvalue(const Mat8& m);

// Rank counts eigenvalues with |lambda| > rank_rel_tol * max|lambda|; the
// kernel basis spans the complement.
RankKernel rank_kernel(const Mat8& m, const Tolerances& tol = {});

// Ranks of rho and its three partial transposes.
RankSignature rank_signature(const DensityMatrix& rho, const Tolerances& tol = {});

// Largest lambda in [0,1] with rho - lambda |psi><psi| positive semidefinite.
// Computed from the pseudo-inverse quadratic form on the range of rho and
// certified by bisection on the minimum eigenvalue; bisection wins if the two
// routes disagree by more than 1e-8.
double max_subtractable_weight(const DensityMatrix& rho, const PureState& psi,
                               const Tolerances& tol = {});

}  // namespace triwit
