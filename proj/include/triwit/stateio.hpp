#pragma once

#include <array>
#include <string>

#include "triwit/verdict.hpp"

namespace triwit {

inline constexpr const char* kToolVersion = "0.1.0";

// On-disk state document: kind "pure" carries 8 [re,im] pairs, kind "density"
// an 8x8 row-major array of pairs. Doubles are written with 17 significant
// digits so the numeric payload round-trips bit-exactly.
struct StateFile {
  bool is_density = false;
  Vec8 pure = Vec8::Zero();
  Mat8 density = Mat8::Zero();
  std::string meta;
};

std::string state_to_json(const StateFile& sf);
StateFile state_from_json(const std::string& text);  // throws std::invalid_argument

StateFile make_state_file(const PureState& psi, const std::string& meta);
StateFile make_state_file(const DensityMatrix& rho, const std::string& meta);

// Validated views (throw std::invalid_argument when invariants fail).
PureState validated_pure(const StateFile& sf);
DensityMatrix validated_density(const StateFile& sf);

struct DecompositionFile {
  MixedClass claimed = MixedClass::GHZ;
  std::vector<WeightedState> parts;
};

std::string decomposition_to_json(const DecompositionFile& df);
DecompositionFile decomposition_from_json(const std::string& text);

// Machine-readable mirror of a tool run; parse + re-serialize is
// byte-identical.
struct ReportDocument {
  std::string command;
  std::string version = kToolVersion;
  std::uint64_t seed = 42;
  int starts = 64;
  Tolerances tol;

  bool has_verdict = false;
  std::string class_lower, class_upper, class_interval;
  std::vector<Certificate> certificates;

  bool has_signature = false;
  RankSignature ranks;
  std::array<bool, 3> ppt{false, false, false};

  bool has_edge = false;
  double edge_residual = 0.0;
  bool edge_is_edge = false;
  bool has_edge_family = false;
  double fam_a = 0.0, fam_b = 0.0, fam_c = 0.0;
  bool fam_analytic_edge = false;

  bool has_overlap = false;
  std::string overlap_class;
  double overlap_value = 0.0;
  std::string overlap_partition;
  std::vector<std::array<double, 2>> overlap_achiever;

  bool has_subtract = false;
  double subtract_lambda = 0.0;
};

std::string report_to_json(const ReportDocument& rep);
ReportDocument report_from_json(const std::string& text);
std::string report_to_text(const ReportDocument& rep);

struct ScanRow {
  double p = 0.0;
  double value = 0.0;
  bool detected = false;
};

// Header "p,value,detected", LF endings; boundary rows appended last.
std::string scan_to_csv(const std::vector<ScanRow>& rows, const std::vector<ScanRow>& boundaries);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace triwit
