#include "triwit/stateio.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace triwit {

namespace {

using nlohmann::json;

std::string fmt_double(double x) {
  if (!std::isfinite(x)) throw numeric_error("non-finite value in serialized payload");
  if (x == 0.0) return "0";  // canonical zero; "-0" does not survive JSON parsing
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

// Canonical writer: fixed key order and layout, 17-digit doubles, so equal
// documents serialize to equal bytes.
class JsonWriter {
 public:
  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

  void open_obj() {
    begin_value();
    out_ += '{';
    scopes_.push_back({false, false, true});
  }
  void close_obj() {
    const Scope s = scopes_.back();
    scopes_.pop_back();
    if (!s.fresh) {
      out_ += '\n';
      indent();
    }
    out_ += '}';
  }
  void open_arr(bool inline_items = false) {
    begin_value();
    out_ += '[';
    scopes_.push_back({true, inline_items, true});
  }
  void close_arr() {
    const Scope s = scopes_.back();
    scopes_.pop_back();
    if (!s.fresh && !s.inl) {
      out_ += '\n';
      indent();
    }
    out_ += ']';
  }
  void key(const char* k) {
    Scope& s = scopes_.back();
    if (!s.fresh) out_ += ',';
    s.fresh = false;
    out_ += '\n';
    indent_items();
    out_ += '"';
    out_ += k;
    out_ += "\": ";
    pending_ = true;
  }
  void value(double v) { raw(fmt_double(v)); }
  void value(int v) { raw(std::to_string(v)); }
  void value(std::uint64_t v) { raw(std::to_string(v)); }
  void value(bool v) { raw(v ? "true" : "false"); }
  void value(const std::string& v) { raw("\"" + escape(v) + "\""); }

 private:
  struct Scope {
    bool is_array, inl, fresh;
  };

  void raw(const std::string& text) {
    begin_value();
    out_ += text;
  }
  void begin_value() {
    if (pending_) {
      pending_ = false;
      return;
    }
    if (scopes_.empty()) return;
    Scope& s = scopes_.back();
    if (s.is_array) {
      if (!s.fresh) out_ += s.inl ? ", " : ",";
      s.fresh = false;
      if (!s.inl) {
        out_ += '\n';
        indent_items();
      }
    }
  }
  void indent() { out_.append(2 * scopes_.size(), ' '); }
  void indent_items() { out_.append(2 * scopes_.size(), ' '); }

  std::string out_;
  std::vector<Scope> scopes_;
  bool pending_ = false;
};

void write_pair(JsonWriter& w, const cd& z) {
  w.open_arr(true);
  w.value(z.real());
  w.value(z.imag());
  w.close_arr();
}

cd read_pair(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json parse_or_throw(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field \"") + name + "\"");
  return *it;
}

Certificate::Kind kind_from_name(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(Certificate::Kind::KnownFamily); ++k) {
    if (s == certificate_kind_name(static_cast<Certificate::Kind>(k))) {
      return static_cast<Certificate::Kind>(k);
    }
  }
  throw std::invalid_argument("unknown certificate kind: " + s);
}

Certificate::Direction direction_from_name(const std::string& s) {
  if (s == "lower") return Certificate::Direction::LowerBound;
  if (s == "upper") return Certificate::Direction::UpperBound;
  if (s == "info") return Certificate::Direction::Info;
  throw std::invalid_argument("unknown certificate direction: " + s);
}

}  // namespace

std::string state_to_json(const StateFile& sf) {
  JsonWriter w;
  w.open_obj();
  w.key("kind");
  w.value(std::string(sf.is_density ? "density" : "pure"));
  w.key("dims");
  w.open_arr(true);
  w.value(2);
  w.value(2);
  w.value(2);
  w.close_arr();
  w.key("data");
  if (sf.is_density) {
    w.open_arr();
    for (int r = 0; r < 8; ++r) {
      w.open_arr(true);
      for (int c = 0; c < 8; ++c) write_pair(w, sf.density(r, c));
      w.close_arr();
    }
    w.close_arr();
  } else {
    w.open_arr(true);
    for (int i = 0; i < 8; ++i) write_pair(w, sf.pure(i));
    w.close_arr();
  }
  w.key("meta");
  w.value(sf.meta);
  w.close_obj();
  return w.take();
}

StateFile state_from_json(const std::string& text) {
  const json j = parse_or_throw(text);
  StateFile sf;
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "density") sf.is_density = true;
  else if (kind == "pure") sf.is_density = false;
  else throw std::invalid_argument("kind must be \"pure\" or \"density\"");

  const json& dims = field(j, "dims");
  if (!(dims.is_array() && dims.size() == 3 && dims[0] == 2 && dims[1] == 2 && dims[2] == 2)) {
    throw std::invalid_argument("dims must be [2,2,2]");
  }

  const json& data = field(j, "data");
  if (!data.is_array() || data.size() != 8) {
    throw std::invalid_argument("data must have 8 rows (density) or 8 amplitudes (pure)");
  }
  if (sf.is_density) {
    for (int r = 0; r < 8; ++r) {
      if (!data[r].is_array() || data[r].size() != 8) {
        throw std::invalid_argument("density rows must have 8 entries");
      }
      for (int c = 0; c < 8; ++c) sf.density(r, c) = read_pair(data[r][c]);
    }
  } else {
    for (int i = 0; i < 8; ++i) sf.pure(i) = read_pair(data[i]);
  }
  if (j.contains("meta")) sf.meta = j["meta"].get<std::string>();
  return sf;
}

StateFile make_state_file(const PureState& psi, const std::string& meta) {
  StateFile sf;
  sf.is_density = false;
  sf.pure = psi.amp();
  sf.meta = meta;
  return sf;
}

StateFile make_state_file(const DensityMatrix& rho, const std::string& meta) {
  StateFile sf;
  sf.is_density = true;
  sf.density = rho.mat();
  sf.meta = meta;
  return sf;
}

PureState validated_pure(const StateFile& sf) {
  if (sf.is_density) throw std::invalid_argument("expected a pure state file");
  return PureState(sf.pure);
}

DensityMatrix validated_density(const StateFile& sf) {
  if (!sf.is_density) throw std::invalid_argument("expected a density state file");
  return DensityMatrix(sf.density);
}

std::string decomposition_to_json(const DecompositionFile& df) {
  JsonWriter w;
  w.open_obj();
  w.key("claimed");
  w.value(std::string(class_name(df.claimed)));
  w.key("components");
  w.open_arr();
  for (const WeightedState& ws : df.parts) {
    w.open_obj();
    w.key("weight");
    w.value(ws.weight);
    w.key("amp");
    w.open_arr(true);
    for (int i = 0; i < 8; ++i) write_pair(w, ws.state.amp(i));
    w.close_arr();
    w.close_obj();
  }
  w.close_arr();
  w.close_obj();
  return w.take();
}

DecompositionFile decomposition_from_json(const std::string& text) {
  const json j = parse_or_throw(text);
  DecompositionFile df;
  const auto cls = class_from_name(field(j, "claimed").get<std::string>());
  if (!cls) throw std::invalid_argument("claimed class must be one of S, B, W, GHZ");
  df.claimed = *cls;
  for (const json& comp : field(j, "components")) {
    const double weight = field(comp, "weight").get<double>();
    const json& amp = field(comp, "amp");
    if (!amp.is_array() || amp.size() != 8) {
      throw std::invalid_argument("component amp must have 8 entries");
    }
    Vec8 v;
    for (int i = 0; i < 8; ++i) v(i) = read_pair(amp[i]);
    df.parts.push_back({weight, PureState(v)});
  }
  return df;
}

std::string report_to_json(const ReportDocument& rep) {
  JsonWriter w;
  w.open_obj();
  w.key("command");
  w.value(rep.command);
  w.key("version");
  w.value(rep.version);
  w.key("seed");
  w.value(rep.seed);
  w.key("starts");
  w.value(rep.starts);
  w.key("tolerances");
  w.open_obj();
  w.key("psd_tol");
  w.value(rep.tol.psd_tol);
  w.key("rank_rel_tol");
  w.value(rep.tol.rank_rel_tol);
  w.key("zero_tol");
  w.value(rep.tol.zero_tol);
  w.close_obj();

  if (rep.has_verdict) {
    w.key("class_lower");
    w.value(rep.class_lower);
    w.key("class_upper");
    w.value(rep.class_upper);
    w.key("class_interval");
    w.value(rep.class_interval);
    w.key("certificates");
    w.open_arr();
    for (const Certificate& c : rep.certificates) {
      w.open_obj();
      w.key("kind");
      w.value(std::string(certificate_kind_name(c.kind)));
      w.key("direction");
      w.value(std::string(certificate_direction_name(c.direction)));
      w.key("bound");
      w.value(std::string(class_name(c.bound)));
      w.key("label");
      w.value(c.label);
      w.key("value");
      w.value(c.value);
      w.key("params");
      w.open_arr(true);
      for (double p : c.params) w.value(p);
      w.close_arr();
      w.close_obj();
    }
    w.close_arr();
  }

  if (rep.has_signature) {
    w.key("rank_signature");
    w.open_arr(true);
    w.value(rep.ranks.r);
    w.value(rep.ranks.rA);
    w.value(rep.ranks.rB);
    w.value(rep.ranks.rC);
    w.close_arr();
    w.key("ppt");
    w.open_arr(true);
    for (bool b : rep.ppt) w.value(b);
    w.close_arr();
  }

  if (rep.has_edge) {
    w.key("edge");
    w.open_obj();
    w.key("residual");
    w.value(rep.edge_residual);
    w.key("is_edge");
    w.value(rep.edge_is_edge);
    if (rep.has_edge_family) {
      w.key("family");
      w.open_obj();
      w.key("a");
      w.value(rep.fam_a);
      w.key("b");
      w.value(rep.fam_b);
      w.key("c");
      w.value(rep.fam_c);
      w.key("analytic_edge");
      w.value(rep.fam_analytic_edge);
      w.close_obj();
    }
    w.close_obj();
  }

  if (rep.has_overlap) {
    w.key("overlap");
    w.open_obj();
    w.key("class");
    w.value(rep.overlap_class);
    w.key("value");
    w.value(rep.overlap_value);
    w.key("partition");
    w.value(rep.overlap_partition);
    w.key("achiever");
    w.open_arr(true);
    for (const auto& pr : rep.overlap_achiever) write_pair(w, cd(pr[0], pr[1]));
    w.close_arr();
    w.close_obj();
  }

  if (rep.has_subtract) {
    w.key("subtract");
    w.open_obj();
    w.key("lambda");
    w.value(rep.subtract_lambda);
    w.close_obj();
  }

  w.close_obj();
  return w.take();
}

ReportDocument report_from_json(const std::string& text) {
  const json j = parse_or_throw(text);
  ReportDocument rep;
  rep.command = field(j, "command").get<std::string>();
  rep.version = field(j, "version").get<std::string>();
  rep.seed = field(j, "seed").get<std::uint64_t>();
  rep.starts = field(j, "starts").get<int>();
  const json& tol = field(j, "tolerances");
  rep.tol.psd_tol = field(tol, "psd_tol").get<double>();
  rep.tol.rank_rel_tol = field(tol, "rank_rel_tol").get<double>();
  rep.tol.zero_tol = field(tol, "zero_tol").get<double>();

  if (j.contains("class_lower")) {
    rep.has_verdict = true;
    rep.class_lower = j["class_lower"].get<std::string>();
    rep.class_upper = j["class_upper"].get<std::string>();
    rep.class_interval = j["class_interval"].get<std::string>();
    for (const json& c : field(j, "certificates")) {
      Certificate cert;
      cert.kind = kind_from_name(field(c, "kind").get<std::string>());
      cert.direction = direction_from_name(field(c, "direction").get<std::string>());
      const auto bound = class_from_name(field(c, "bound").get<std::string>());
      if (!bound) throw std::invalid_argument("bad certificate bound");
      cert.bound = *bound;
      cert.label = field(c, "label").get<std::string>();
      cert.value = field(c, "value").get<double>();
      for (const json& p : field(c, "params")) cert.params.push_back(p.get<double>());
      rep.certificates.push_back(std::move(cert));
    }
  }

  if (j.contains("rank_signature")) {
    rep.has_signature = true;
    const json& rs = j["rank_signature"];
    rep.ranks = {rs[0].get<int>(), rs[1].get<int>(), rs[2].get<int>(), rs[3].get<int>()};
    const json& ppt = field(j, "ppt");
    for (int i = 0; i < 3; ++i) rep.ppt[i] = ppt[i].get<bool>();
  }

  if (j.contains("edge")) {
    rep.has_edge = true;
    const json& e = j["edge"];
    rep.edge_residual = field(e, "residual").get<double>();
    rep.edge_is_edge = field(e, "is_edge").get<bool>();
    if (e.contains("family")) {
      rep.has_edge_family = true;
      const json& f = e["family"];
      rep.fam_a = field(f, "a").get<double>();
      rep.fam_b = field(f, "b").get<double>();
      rep.fam_c = field(f, "c").get<double>();
      rep.fam_analytic_edge = field(f, "analytic_edge").get<bool>();
    }
  }

  if (j.contains("overlap")) {
    rep.has_overlap = true;
    const json& o = j["overlap"];
    rep.overlap_class = field(o, "class").get<std::string>();
    rep.overlap_value = field(o, "value").get<double>();
    rep.overlap_partition = field(o, "partition").get<std::string>();
    for (const json& pr : field(o, "achiever")) {
      const cd z = read_pair(pr);
      rep.overlap_achiever.push_back({z.real(), z.imag()});
    }
  }

  if (j.contains("subtract")) {
    rep.has_subtract = true;
    rep.subtract_lambda = field(j["subtract"], "lambda").get<double>();
  }
  return rep;
}

std::string report_to_text(const ReportDocument& rep) {
  std::ostringstream ss;
  ss.precision(12);
  ss << "triwit " << rep.command << " report (version " << rep.version << ")\n";
  if (rep.has_verdict) {
    ss << "  class: " << rep.class_interval << "   (lower " << rep.class_lower << ", upper "
       << rep.class_upper << ")\n";
    ss << "  certificates:\n";
    int i = 0;
    for (const Certificate& c : rep.certificates) {
      ss << "    " << ++i << ". " << certificate_kind_name(c.kind) << " [" << c.label << "] "
         << certificate_direction_name(c.direction);
      if (c.direction != Certificate::Direction::Info) ss << " " << class_name(c.bound);
      ss << "  value=" << c.value << "\n";
    }
  }
  if (rep.has_signature) {
    ss << "  ranks: r=" << rep.ranks.r << " rA=" << rep.ranks.rA << " rB=" << rep.ranks.rB
       << " rC=" << rep.ranks.rC << "\n";
    ss << "  ppt: A=" << (rep.ppt[0] ? "yes" : "no") << " B=" << (rep.ppt[1] ? "yes" : "no")
       << " C=" << (rep.ppt[2] ? "yes" : "no") << "\n";
  }
  if (rep.has_edge) {
    ss << "  edge search: residual=" << rep.edge_residual
       << " is_edge=" << (rep.edge_is_edge ? "yes" : "no") << "\n";
    if (rep.has_edge_family) {
      ss << "  recognized family: a=" << rep.fam_a << " b=" << rep.fam_b << " c=" << rep.fam_c
         << " analytic edge=" << (rep.fam_analytic_edge ? "yes" : "no") << "\n";
    }
  }
  if (rep.has_overlap) {
    ss << "  max squared overlap (" << rep.overlap_class << "): " << rep.overlap_value;
    if (!rep.overlap_partition.empty()) ss << "  partition " << rep.overlap_partition;
    ss << "\n";
    if (!rep.overlap_achiever.empty()) {
      ss << "  achiever:";
      for (const auto& pr : rep.overlap_achiever) ss << " (" << pr[0] << "," << pr[1] << ")";
      ss << "\n";
    }
  }
  if (rep.has_subtract) {
    ss << "  max subtractable weight: " << rep.subtract_lambda << "\n";
  }
  ss << "  tolerances: psd=" << rep.tol.psd_tol << " rank=" << rep.tol.rank_rel_tol
     << " zero=" << rep.tol.zero_tol << "\n";
  ss << "  seed: " << rep.seed << "   starts: " << rep.starts << "\n";
  return ss.str();
}

std::string scan_to_csv(const std::vector<ScanRow>& rows, const std::vector<ScanRow>& boundaries) {
  std::string out = "p,value,detected\n";
  const auto emit_row = [&out](const ScanRow& r) {
    out += fmt_double(r.p);
    out += ',';
    out += fmt_double(r.value);
    out += ',';
    out += r.detected ? '1' : '0';
    out += '\n';
  };
  for (const ScanRow& r : rows) emit_row(r);
  for (const ScanRow& r : boundaries) emit_row(r);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write file: " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace triwit
