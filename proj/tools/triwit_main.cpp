// triwit: generation, classification, witness scans, edge checks and overlap
// computations for three-qubit states. Exit codes: 0 success, 2 input or
// validation error, 3 numerical failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "triwit/stateio.hpp"

namespace {

using namespace triwit;

struct CommonOpts {
  std::uint64_t seed = 42;
  bool seed_given = false;
  int starts = 64;
  Tolerances tol;
  std::string report_format = "text";
  std::string out_path;
};

void apply_env_seed(CommonOpts& c) {
  if (c.seed_given) return;
  const char* env = std::getenv("TRIWIT_SEED");
  if (env == nullptr) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    throw std::invalid_argument("TRIWIT_SEED is not an unsigned integer");
  }
  c.seed = v;
}

OptimizerConfig optimizer_config(const CommonOpts& c) {
  OptimizerConfig cfg;
  cfg.seed = c.seed;
  cfg.starts = c.starts;
  return cfg;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(out_path, content);
  }
}

void emit_report(const CommonOpts& c, const ReportDocument& rep) {
  emit(c.out_path, c.report_format == "machine" ? report_to_json(rep) : report_to_text(rep));
}

ReportDocument base_report(const std::string& command, const CommonOpts& c) {
  ReportDocument rep;
  rep.command = command;
  rep.seed = c.seed;
  rep.starts = c.starts;
  rep.tol = c.tol;
  return rep;
}

void add_common_flags(CLI::App* sub, CommonOpts& c, bool with_report = true) {
  sub->add_option("--seed", c.seed, "RNG seed (TRIWIT_SEED overrides the default)")
      ->each([&c](const std::string&) { c.seed_given = true; });
  sub->add_option("--starts", c.starts, "multistart count")->check(CLI::PositiveNumber);
  sub->add_option("--tol", c.tol.psd_tol, "positivity tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--rank-tol", c.tol.rank_rel_tol, "relative rank tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--zero-tol", c.tol.zero_tol, "scalar zero tolerance")
      ->check(CLI::PositiveNumber);
  if (with_report) {
    sub->add_option("--report", c.report_format, "report format")
        ->check(CLI::IsMember({"text", "machine"}));
  }
  sub->add_option("--out", c.out_path, "output file (atomic write; default stdout)");
}

// ---- gen ----

struct GenOpts {
  CommonOpts common;
  std::vector<double> ghz_params, w_params, edge_params;
  double family_p = -1.0;
  bool family_given = false;
  std::string named;
};

int run_gen(const GenOpts& o) {
  StateFile sf;
  int selected = 0;
  selected += !o.ghz_params.empty();
  selected += !o.w_params.empty();
  selected += !o.edge_params.empty();
  selected += o.family_given;
  selected += !o.named.empty();
  if (selected != 1) {
    std::cerr << "gen: select exactly one of --ghz-params, --w-params, --family-p, --edge, "
                 "--named\n";
    return 2;
  }

  try {
    if (!o.ghz_params.empty()) {
      if (o.ghz_params.size() != 6) {
        throw std::invalid_argument("--ghz-params needs lambda0..lambda4,theta (6 values)");
      }
      GhzGenParams p;
      for (int i = 0; i < 5; ++i) p.lambda[i] = o.ghz_params[i];
      p.theta = o.ghz_params[5];
      sf = make_state_file(gen_ghz_type(p), "gen --ghz-params");
    } else if (!o.w_params.empty()) {
      if (o.w_params.size() != 4) {
        throw std::invalid_argument("--w-params needs lambda0..lambda3 (4 values)");
      }
      WGenParams p;
      for (int i = 0; i < 4; ++i) p.lambda[i] = o.w_params[i];
      sf = make_state_file(gen_w_type(p), "gen --w-params");
    } else if (!o.edge_params.empty()) {
      if (o.edge_params.size() != 3) throw std::invalid_argument("--edge needs a,b,c (3 values)");
      sf = make_state_file(edge_family({o.edge_params[0], o.edge_params[1], o.edge_params[2]}),
                           "gen --edge");
    } else if (o.family_given) {
      sf = make_state_file(family_state(o.family_p), "gen --family-p");
    } else if (o.named == "ghz") {
      sf = make_state_file(ghz_state(), "gen --named ghz");
    } else if (o.named == "w") {
      sf = make_state_file(w_state(), "gen --named w");
    } else {
      throw std::invalid_argument("--named accepts ghz or w");
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "gen: " << e.what() << "\n";
    return 2;
  }

  emit(o.common.out_path, state_to_json(sf));
  return 0;
}

// ---- classify ----

struct ClassifyOpts {
  CommonOpts common;
  std::string in_path;
  std::string decomposition_path;
};

int run_classify(const ClassifyOpts& o) {
  DensityMatrix rho = DensityMatrix::maximally_mixed();
  std::optional<SuppliedDecomposition> supplied;
  try {
    const StateFile sf = state_from_json(read_file(o.in_path));
    if (sf.is_density) {
      rho = validated_density(sf);
    } else {
      rho = DensityMatrix::projector(validated_pure(sf));
    }
    if (!o.decomposition_path.empty()) {
      const DecompositionFile df = decomposition_from_json(read_file(o.decomposition_path));
      supplied = SuppliedDecomposition{df.parts, df.claimed};
    }
  } catch (const std::exception& e) {
    std::cerr << "classify: input error: " << e.what() << "\n";
    return 2;
  }

  try {
    ReportDocument rep = base_report("classify", o.common);
    const ClassVerdict verdict = classify_mixed(rho, optimizer_config(o.common), o.common.tol,
                                                supplied ? &*supplied : nullptr);
    rep.has_verdict = true;
    rep.class_lower = class_name(verdict.lower);
    rep.class_upper = class_name(verdict.upper);
    rep.class_interval = verdict_class_string(verdict);
    rep.certificates = verdict.evidence;
    rep.has_signature = true;
    rep.ranks = rank_signature(rho, o.common.tol);
    const PptSignature sig = ppt_signature(rho, o.common.tol);
    rep.ppt = {sig.pptA, sig.pptB, sig.pptC};
    emit_report(o.common, rep);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "classify: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "classify: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

// ---- scan ----

struct ScanOpts {
  CommonOpts common;
  std::string witness = "w2";
  std::string family = "wmix";
  double p_min = 0.0, p_max = 1.0;
  int steps = 1000;
};

int run_scan(const ScanOpts& o) {
  if (!(o.p_min >= 0.0 && o.p_min < o.p_max && o.p_max <= 1.0) || o.steps < 2) {
    std::cerr << "scan: need 0 <= p-min < p-max <= 1 and steps >= 2\n";
    return 2;
  }
  if (o.family != "wmix") {
    std::cerr << "scan: unknown family \"" << o.family << "\" (available: wmix)\n";
    return 2;
  }
  // Witnesses are taken relative to the scanned family: "w1" applies the 2/3
  // boundary to the family's own projector vector (the canonical three-term
  // vector has constant expectation on this family and detects nothing).
  Witness w = std_witness(StdWitnessKind::W2);
  if (o.witness == "ghz") {
    w = std_witness(StdWitnessKind::GHZ);
  } else if (o.witness == "w1") {
    w = projector_witness(2.0 / 3.0, max_ghz_overlap_w_state(), Boundary::BBoundary);
  } else if (o.witness != "w2") {
    std::cerr << "scan: --witness accepts ghz, w1 or w2\n";
    return 2;
  }

  try {
    const auto family = [](double p) { return family_state(p); };

    std::vector<ScanRow> rows;
    for (int i = 0; i <= o.steps; ++i) {
      const double p = o.p_min + (o.p_max - o.p_min) * i / o.steps;
      const double v = evaluate(w, family(p));
      rows.push_back({p, v, v < 0.0});
    }

    std::vector<ScanRow> boundaries;
    const DetectionInterval interval = detection_interval(w, family, o.p_min, o.p_max, o.steps);
    if (interval.found) {
      const double margin = (o.p_max - o.p_min) * 1e-12;
      for (double b : {interval.p_lo, interval.p_hi}) {
        if (b > o.p_min + margin && b < o.p_max - margin) {
          const double v = evaluate(w, family(b));
          boundaries.push_back({b, v, v < 0.0});
        }
      }
    }
    emit(o.common.out_path, scan_to_csv(rows, boundaries));
    return 0;
  } catch (const numeric_error& e) {
    std::cerr << "scan: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

// ---- edge-check ----

struct EdgeCheckOpts {
  CommonOpts common;
  std::string in_path;
};

int run_edge_check(const EdgeCheckOpts& o) {
  DensityMatrix rho = DensityMatrix::maximally_mixed();
  try {
    rho = validated_density(state_from_json(read_file(o.in_path)));
  } catch (const std::exception& e) {
    std::cerr << "edge-check: input error: " << e.what() << "\n";
    return 2;
  }

  try {
    ReportDocument rep = base_report("edge-check", o.common);
    rep.has_signature = true;
    rep.ranks = rank_signature(rho, o.common.tol);
    const PptSignature sig = ppt_signature(rho, o.common.tol);
    rep.ppt = {sig.pptA, sig.pptB, sig.pptC};

    const EdgeVerdict verdict =
        product_in_ranges_search(rho, optimizer_config(o.common), o.common.tol);
    rep.has_edge = true;
    rep.edge_residual = verdict.residual;
    rep.edge_is_edge = verdict.is_edge;

    if (const auto ef = recognize_edge_family(rho)) {
      rep.has_edge_family = true;
      rep.fam_a = ef->a;
      rep.fam_b = ef->b;
      rep.fam_c = ef->c;
      rep.fam_analytic_edge = edge_family_is_edge(*ef, o.common.tol);
    }
    emit_report(o.common, rep);
    return 0;
  } catch (const numeric_error& e) {
    std::cerr << "edge-check: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

// ---- overlap ----

struct OverlapOpts {
  CommonOpts common;
  std::string in_path;
  std::string cls = "w";
};

int run_overlap(const OverlapOpts& o) {
  PureState psi = ghz_state();
  try {
    psi = validated_pure(state_from_json(read_file(o.in_path)));
  } catch (const std::exception& e) {
    std::cerr << "overlap: input error: " << e.what() << "\n";
    return 2;
  }

  try {
    ReportDocument rep = base_report("overlap", o.common);
    rep.has_overlap = true;
    rep.overlap_class = o.cls;
    if (o.cls == "bisep") {
      const BisepOverlap res = max_bisep_overlap(psi);
      rep.overlap_value = res.value;
      rep.overlap_partition = partition_name(res.partition);
    } else {
      const WOverlap res = max_w_overlap(psi, optimizer_config(o.common));
      rep.overlap_value = res.value;
      for (int i = 0; i < 8; ++i) {
        rep.overlap_achiever.push_back({res.achiever.amp(i).real(), res.achiever.amp(i).imag()});
      }
    }
    emit_report(o.common, rep);
    return 0;
  } catch (const numeric_error& e) {
    std::cerr << "overlap: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

// ---- subtract ----

struct SubtractOpts {
  CommonOpts common;
  std::string in_path;
  std::string psi_path;
  std::string remainder_path;
};

int run_subtract(const SubtractOpts& o) {
  DensityMatrix rho = DensityMatrix::maximally_mixed();
  PureState psi = ghz_state();
  try {
    rho = validated_density(state_from_json(read_file(o.in_path)));
    psi = validated_pure(state_from_json(read_file(o.psi_path)));
  } catch (const std::exception& e) {
    std::cerr << "subtract: input error: " << e.what() << "\n";
    return 2;
  }

  try {
    const double lambda = max_subtractable_weight(rho, psi, o.common.tol);
    ReportDocument rep = base_report("subtract", o.common);
    rep.has_subtract = true;
    rep.subtract_lambda = lambda;
    emit_report(o.common, rep);

    if (!o.remainder_path.empty() && lambda < 1.0 - 1e-12) {
      Mat8 rest = (rho.mat() - lambda * (psi.amp() * psi.amp().adjoint())) / (1.0 - lambda);
      rest = 0.5 * (rest + rest.adjoint());
      // clip the tolerated negative dust so the remainder revalidates
      const EigResult eig = eig_hermitian(rest);
      Mat8 clipped = Mat8::Zero();
      double trace = 0.0;
      for (int k = 0; k < 8; ++k) {
        const double lam = std::max(0.0, eig.values[k]);
        trace += lam;
        clipped += lam * (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
      }
      clipped /= trace;
      write_file_atomic(o.remainder_path,
                        state_to_json(make_state_file(DensityMatrix(clipped), "subtract remainder")));
    }
    return 0;
  } catch (const numeric_error& e) {
    std::cerr << "subtract: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-qubit entanglement class toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("triwit ") + kToolVersion);

  GenOpts gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a state file");
  gen_cmd->add_option("--ghz-params", gen.ghz_params, "lambda0..lambda4,theta")->delimiter(',');
  gen_cmd->add_option("--w-params", gen.w_params, "lambda0..lambda3")->delimiter(',');
  gen_cmd->add_option("--edge", gen.edge_params, "a,b,c")->delimiter(',');
  gen_cmd->add_option("--family-p", gen.family_p, "mixing weight p in [0,1]")
      ->each([&gen](const std::string&) { gen.family_given = true; });
  gen_cmd->add_option("--named", gen.named, "ghz|w");
  add_common_flags(gen_cmd, gen.common, false);

  ClassifyOpts classify;
  CLI::App* classify_cmd = app.add_subcommand("classify", "classify a state into S/B/W/GHZ");
  classify_cmd->add_option("--in", classify.in_path, "input state file")->required();
  classify_cmd->add_option("--decomposition", classify.decomposition_path,
                           "decomposition file asserting an upper bound");
  add_common_flags(classify_cmd, classify.common);

  ScanOpts scan;
  CLI::App* scan_cmd = app.add_subcommand("scan", "witness expectation along the mixing family");
  scan_cmd->add_option("--witness", scan.witness, "ghz|w1|w2")->required();
  scan_cmd->add_option("--family", scan.family, "family name (wmix)");
  scan_cmd->add_option("--p-min", scan.p_min, "scan start");
  scan_cmd->add_option("--p-max", scan.p_max, "scan end");
  scan_cmd->add_option("--steps", scan.steps, "scan intervals");
  add_common_flags(scan_cmd, scan.common, false);

  EdgeCheckOpts edge;
  CLI::App* edge_cmd = app.add_subcommand("edge-check", "PPT/rank signature and edge search");
  edge_cmd->add_option("--in", edge.in_path, "input density state file")->required();
  add_common_flags(edge_cmd, edge.common);

  OverlapOpts overlap;
  CLI::App* overlap_cmd = app.add_subcommand("overlap", "maximal squared class overlap");
  overlap_cmd->add_option("--in", overlap.in_path, "input pure state file")->required();
  overlap_cmd->add_option("--class", overlap.cls, "w|bisep")
      ->check(CLI::IsMember({"w", "bisep"}));
  add_common_flags(overlap_cmd, overlap.common);

  SubtractOpts subtract;
  CLI::App* subtract_cmd =
      app.add_subcommand("subtract", "maximal projector weight removable from a state");
  subtract_cmd->add_option("--in", subtract.in_path, "input density state file")->required();
  subtract_cmd->add_option("--psi", subtract.psi_path, "pure state file to subtract")->required();
  subtract_cmd->add_option("--remainder", subtract.remainder_path,
                           "write the normalized remainder state here");
  add_common_flags(subtract_cmd, subtract.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) {
      apply_env_seed(gen.common);
      return run_gen(gen);
    }
    if (classify_cmd->parsed()) {
      apply_env_seed(classify.common);
      return run_classify(classify);
    }
    if (scan_cmd->parsed()) {
      apply_env_seed(scan.common);
      return run_scan(scan);
    }
    if (edge_cmd->parsed()) {
      apply_env_seed(edge.common);
      return run_edge_check(edge);
    }
    if (overlap_cmd->parsed()) {
      apply_env_seed(overlap.common);
      return run_overlap(overlap);
    }
    if (subtract_cmd->parsed()) {
      apply_env_seed(subtract.common);
      return run_subtract(subtract);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const triwit::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
