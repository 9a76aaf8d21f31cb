#pragma once

#include "triwit/overlap.hpp"

namespace triwit {

// Diagonal family (1, a, b, c, 1/c, 1/b, 1/a, 1)/n with corner entries 1/n at
// (000,111); n = 2 + a + 1/a + b + 1/b + c + 1/c.
struct EdgeFamilyParams {
  double a = 1.0, b = 1.0, c = 1.0;

  EdgeFamilyParams(double a_, double b_, double c_);
  double n() const;
};

struct PptSignature {
  bool pptA = false, pptB = false, pptC = false;
  bool all() const { return pptA && pptB && pptC; }
};

struct EdgeVerdict {
  bool is_edge = false;
  double residual = 0.0;      // minimized product-vector objective
  PureState witness_vector;   // best product vector found
};

PptSignature ppt_signature(const DensityMatrix& rho, const Tolerances& tol = {});

DensityMatrix edge_family(const EdgeFamilyParams& p);

// Analytic kernel vectors: (|000>-|111>)/sqrt(2) for the state itself and
// |011>-c|100>, |010>-b|101>, |001>-a|110> (normalized) for the three partial
// transposes.
struct EdgeFamilyKernels {
  PureState state_kernel, ptA_kernel, ptB_kernel, ptC_kernel;
};

EdgeFamilyKernels edge_family_kernels(const EdgeFamilyParams& p);

// Searches for a product vector in the range of rho whose partial conjugates
// lie in the ranges of the partial transposes; a residual above 1e-6 is the
// numerical edge certificate, a residual below 1e-8 means a vector was found.
EdgeVerdict product_in_ranges_search(const DensityMatrix& rho, const OptimizerConfig& cfg = {},
                                     const Tolerances& tol = {});

// Closed form for the family: edge unless ab = c.
bool edge_family_is_edge(const EdgeFamilyParams& p, const Tolerances& tol = {});

struct WeightedState {
  double weight = 0.0;
  PureState state;
};

// Convex decomposition of the family into basis products plus a uniform phase
// average of vectors product across the requested cut; reproduces the matrix
// exactly for n_phases >= 3.
std::vector<WeightedState> edge_family_bisep_decomposition(const EdgeFamilyParams& p,
                                                           Party partition, int n_phases = 4);

}  // namespace triwit
