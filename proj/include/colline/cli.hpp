#pragma once

#include <CLI/CLI.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "colline/certificate.hpp"
#include "colline/classify.hpp"
#include "colline/error.hpp"
#include "colline/maps.hpp"
#include "colline/parser.hpp"
#include "colline/predicates.hpp"
#include "colline/report.hpp"
#include "colline/theorem.hpp"

namespace colline::cli {

/// Bad invocation or unreadable input; exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A map together with a JSON description that rebuilds it without touching the filesystem.
struct LoadedMap {
  MapHandle map;
  Json source;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Splits "k=v,k=(1,2)" at commas outside parentheses.
inline std::map<std::string, std::string> builtin_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t depth = 0, start = 0;
  auto flush = [&](std::size_t end) {
    std::string item = text.substr(start, end - start);
    if (item.empty()) return;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("builtin parameter '" + item + "' is not key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')' && depth > 0) --depth;
    if (text[i] == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

inline std::size_t size_param(const std::map<std::string, std::string>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw UsageError("builtin is missing parameter '" + key + "'");
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("builtin parameter '" + key + "' must be a non-negative integer, got '" + it->second + "'");
  }
}

/// Rebuilds a map from a source description written by `load_*`.
inline MapHandle map_from_source(const Json& src) {
  const std::string kind = src.at("kind").get<std::string>();
  if (kind == "dsl") return make_dsl(parse_map(src.at("text").get<std::string>()));
  if (kind != "builtin") throw UsageError("unknown map source kind '" + kind + "'");
  const std::string family = src.at("family").get<std::string>();
  if (family == "linear") return make_linear(Matrix::parse(src.at("matrix").get<std::string>()), "linear");
  auto p = builtin_params(src.at("params").get<std::string>());
  if (family == "lemma23") {
    ExprPtr psi = p.count("psi") ? parse_expression(p.at("psi"), 1) : default_psi();
    if (!p.count("d0")) throw UsageError("builtin is missing parameter 'd0'");
    return make_lemma23(size_param(p, "m"), size_param(p, "n"), psi, size_param(p, "e0"), Vector::parse(p.at("d0")));
  }
  if (family == "identity") return make_identity(size_param(p, "n"));
  if (family == "zero") return make_zero(size_param(p, "m"), size_param(p, "n"));
  throw UsageError("unknown builtin '" + family + "' (linear, lemma23, identity, zero)");
}

/// `linear:<matrix file>`, `lemma23:m=..,n=..,e0=..,d0=(..)[,psi=<expr in x0>]`, `identity:n=..`, `zero:m=..,n=..`.
inline LoadedMap load_builtin(const std::string& spec) {
  std::size_t colon = spec.find(':');
  std::string family = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  Json src{{"kind", "builtin"}, {"spec", spec}, {"family", family}};
  if (family == "linear") {
    if (rest.empty()) throw UsageError("linear builtin needs a matrix file: linear:<path>");
    src["matrix"] = read_file(rest);
  } else {
    src["params"] = rest;
  }
  return LoadedMap{map_from_source(src), src};
}

/// One entry per map in the file; each source holds that map's own canonical text.
inline std::vector<LoadedMap> load_file(const std::string& path) {
  std::vector<LoadedMap> out;
  std::vector<MapSpec> specs;
  try {
    specs = parse_maps(read_file(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + e.what());
  }
  for (auto& spec : specs) {
    std::string text = render(spec);
    out.push_back(LoadedMap{make_dsl(std::move(spec)), Json{{"kind", "dsl"}, {"path", path}, {"text", text}}});
  }
  if (out.empty()) throw UsageError("'" + path + "' defines no maps");
  return out;
}

/// Everything that determines a report's content.
struct Invocation {
  std::string command;
  /// Check name for `check`, certificate kind for `certify`.
  std::string target;
  ProbeConfig probes;
  bool symbolic = true;
  std::optional<Vector> a, b;
  std::optional<Scalar> r;
};

inline Json to_json(const Invocation& inv) {
  Json j{{"command", inv.command}};
  if (!inv.target.empty()) j["target"] = inv.target;
  j["probes"] = inv.probes.count;
  j["seed"] = inv.probes.seed;
  j["range"] = inv.probes.range;
  j["params_per_line"] = inv.probes.params_per_line;
  j["symbolic"] = inv.symbolic;
  if (inv.a) j["a"] = inv.a->str();
  if (inv.b) j["b"] = inv.b->str();
  if (inv.r) j["r"] = inv.r->str();
  return j;
}

inline Invocation invocation_from_json(const Json& j) {
  Invocation inv;
  inv.command = j.at("command").get<std::string>();
  inv.target = j.value("target", std::string());
  inv.probes.count = j.at("probes").get<std::size_t>();
  inv.probes.seed = j.at("seed").get<std::uint64_t>();
  inv.probes.range = j.at("range").get<std::int64_t>();
  inv.probes.params_per_line = j.at("params_per_line").get<std::size_t>();
  inv.symbolic = j.at("symbolic").get<bool>();
  if (j.contains("a")) inv.a = Vector::parse(j.at("a").get<std::string>());
  if (j.contains("b")) inv.b = Vector::parse(j.at("b").get<std::string>());
  if (j.contains("r")) inv.r = Scalar::parse(j.at("r").get<std::string>());
  return inv;
}

using CheckRunner = std::function<CheckOutcome(const MapHandle&, const ProbeConfig&)>;

inline CheckOutcome plane_image_outcome(const MapHandle& f, const ProbeConfig& cfg) {
  const std::size_t m = f.input_dim();
  if (m < 2) throw UsageError("plane-image needs input dimension at least 2");
  PlaneImage p = classify_plane_image(f, Plane(Vector::zero(m), Vector::unit(m, 0), Vector::unit(m, 1)), cfg);
  if (p.violation) return *p.violation;
  return CheckOutcome{checks::plane_image, Verdict::pass, p.samples, 0, std::nullopt,
                      std::string("image of the x0-x1 plane is a ") + to_string(p.kind) +
                          (p.kind == ImageKind::plane ? (p.injective ? ", injective" : ", not injective") : "")};
}

inline const std::map<std::string, CheckRunner>& check_runners() {
  static const std::map<std::string, CheckRunner> table = {
      {checks::homogeneity, check_homogeneity},
      {checks::additivity, check_additivity},
      {checks::zero_fixed, [](const MapHandle& f, const ProbeConfig&) { return check_zero_fixed(f); }},
      {checks::line_image, check_line_image},
      {checks::line_injectivity, check_line_injectivity},
      {checks::ratio, check_ratio_preservation},
      {checks::parallelism, check_parallelism_preservation},
      {checks::betweenness_cor43,
       [](const MapHandle& f, const ProbeConfig& c) { return check_betweenness(f, c, BetweennessVariant::cor43); }},
      {checks::betweenness_prop44,
       [](const MapHandle& f, const ProbeConfig& c) { return check_betweenness(f, c, BetweennessVariant::prop44); }},
      {checks::scalar_multiplicative, check_scalar_multiplicative},
      {checks::scalar_monotone, check_scalar_monotone},
      {checks::plane_image, plane_image_outcome},
      {checks::phi_consistency,
       [](const MapHandle& f, const ProbeConfig& c) {
         auto ind = find_independence_witness(f, c);
         if (!ind) throw PreconditionError("phi-consistency: no pair with independent images found");
         return phi_consistency(f, c, *ind).outcome;
       }},
      {checks::scalar_dichotomy,
       [](const MapHandle& f, const ProbeConfig& c) {
         DichotomyResult d = scalar_dichotomy(f, c);
         CheckOutcome o = d.checks.back();
         o.note = std::string("dichotomy: ") + to_string(d.kind);
         if (!d.failed_hypotheses.empty()) {
           o.note += "; failed hypotheses:";
           for (const auto& h : d.failed_hypotheses) o.note += " " + h;
         }
         return o;
       }},
      {"theorem29", [](const MapHandle& f, const ProbeConfig& c) { return theorem29_pipeline(f, c).outcome; }},
  };
  return table;
}

inline std::string known_checks() {
  std::string out;
  for (const auto& [name, run] : check_runners()) out += (out.empty() ? "" : ", ") + name;
  return out;
}

inline Certificate certify(const MapHandle& f, const Invocation& inv) {
  auto need = [&](const std::optional<Vector>& v, const char* name) {
    if (!v) throw UsageError("certify " + inv.target + " needs --" + name);
    return *v;
  };
  if (inv.target == "lemma32") return lemma32_certificate(f, need(inv.a, "a"), need(inv.b, "b"));
  auto ind = find_independence_witness(f, inv.probes);
  if (inv.target == "homogeneity") {
    if (!inv.a && !ind) throw PreconditionError("certify homogeneity: no pair with independent images found; pass --a and --b");
    Vector a = inv.a ? *inv.a : ind->first;
    Vector b = inv.b ? *inv.b : ind->second;
    return homogeneity_certificate(f, a, b, inv.r ? *inv.r : Scalar(2));
  }
  if (inv.target == "additivity") {
    if (!ind) throw PreconditionError("certify additivity: no pair with independent images found");
    return additivity_certificate(f, inv.a ? *inv.a : ind->first, inv.b ? *inv.b : ind->second, *ind);
  }
  throw UsageError("unknown certificate kind '" + inv.target + "' (homogeneity, additivity, lemma32)");
}

/// The report for one map, without the wall-time field.
inline Json build_report(const LoadedMap& lm, const Invocation& inv) {
  const MapHandle& f = lm.map;
  Json report{{"tool", "colline"}, {"version", kToolVersion}};
  report["map"] = Json{{"name", f.name()}, {"input_dim", f.input_dim()}, {"output_dim", f.output_dim()}, {"source", lm.source}};
  report["config"] = to_json(inv);
  Json outcomes = Json::array(), certificates = Json::array();
  if (inv.command == "classify") {
    Classification c = classify_map(f, inv.probes, ClassifyOptions{inv.symbolic});
    for (const auto& o : c.outcomes) outcomes.push_back(to_json(o));
    for (const auto& cert : c.certificates) certificates.push_back(to_json(cert));
    report["outcomes"] = outcomes;
    report["certificates"] = certificates;
    report["classification"] = to_json(c);
  } else if (inv.command == "check") {
    auto it = check_runners().find(inv.target);
    if (it == check_runners().end()) throw UsageError("unknown check '" + inv.target + "' (" + known_checks() + ")");
    outcomes.push_back(to_json(it->second(f, inv.probes)));
    report["outcomes"] = outcomes;
    report["certificates"] = certificates;
  } else if (inv.command == "certify") {
    report["outcomes"] = outcomes;
    try {
      certificates.push_back(to_json(certify(f, inv)));
    } catch (const ViolationError& e) {
      report["error"] = e.what();
    }
    report["certificates"] = certificates;
  } else if (inv.command == "zoo") {
    auto dsl = f.to_dsl();
    report["dsl"] = dsl ? Json(*dsl) : Json(nullptr);
    auto form = f.symbolic_form();
    report["form"] = form ? to_json(*form) : Json(nullptr);
    Json basis = Json::array();
    for (std::size_t i = 0; i < f.input_dim(); ++i) basis.push_back(f(Vector::unit(f.input_dim(), i)).str());
    report["basis_images"] = basis;
    report["outcomes"] = outcomes;
    report["certificates"] = certificates;
  } else {
    throw UsageError("unknown command '" + inv.command + "'");
  }
  return report;
}

inline Json without_wall_time(Json j) {
  if (j.is_array()) {
    for (auto& x : j) x = without_wall_time(x);
  } else if (j.is_object()) {
    j.erase("wall_time_ms");
  }
  return j;
}

inline std::vector<Json> reports_in(const Json& doc) {
  if (doc.is_array()) return std::vector<Json>(doc.begin(), doc.end());
  return {doc};
}

/// Re-checks every witness, certificate and exact form in one report. Returns the problems found.
inline std::vector<std::string> revalidate_report(const Json& report) {
  std::vector<std::string> problems;
  MapHandle f = map_from_source(report.at("map").at("source"));
  std::vector<CheckOutcome> outcomes;
  for (const auto& j : report.at("outcomes")) outcomes.push_back(outcome_from_json(j));
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const CheckOutcome& o = outcomes[i];
    if (o.failed() && !o.witness) problems.push_back("outcome " + std::to_string(i) + " (" + o.check + ") fails without a witness");
    if (o.witness && !witness_reproduces(o.check, f, *o.witness)) {
      problems.push_back("witness of outcome " + std::to_string(i) + " (" + o.check + ") does not reproduce");
    }
  }
  MapHandle subject = f;
  if (report.contains("classification")) {
    const Json& c = report.at("classification");
    if (!c.at("reduced_at").is_null()) subject = shift_map(f, Vector::parse(c.at("reduced_at").get<std::string>()));
    const std::string verdict = c.at("verdict").get<std::string>();
    if (verdict == "NonLinear") {
      const Json& idx = c.at("failing");
      if (idx.is_null() || idx.get<std::size_t>() >= outcomes.size() || !outcomes[idx.get<std::size_t>()].failed()) {
        problems.push_back("NonLinear verdict does not point at a failed outcome");
      }
    }
    if (verdict == "ExactLinear" || verdict == "ExactAffine") {
      auto form = f.symbolic_form();
      if (!form || c.at("form").is_null() || to_json(*form) != c.at("form")) {
        problems.push_back("stored exact form differs from the map's symbolic form");
      } else if ((verdict == "ExactLinear") != form->is_linear()) {
        problems.push_back("exact verdict disagrees with the offset of the form");
      }
    }
  }
  const Json& certs = report.at("certificates");
  for (std::size_t i = 0; i < certs.size(); ++i) {
    try {
      Certificate c = certificate_from_json(certs[i]);
      validate_certificate(c);
      validate_certificate(c, &subject);
    } catch (const Error& e) {
      problems.push_back("certificate " + std::to_string(i) + ": " + e.what());
    }
  }
  return problems;
}

inline std::uint64_t default_seed() {
  const char* env = std::getenv("COLLINE_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError(std::string("COLLINE_SEED must be a non-negative integer, got '") + env + "'");
  }
}

inline int emit(const Json& doc, const std::string& format, const std::string& out_path, std::ostream& out) {
  std::string text;
  if (format == "text") {
    for (const auto& r : reports_in(doc)) text += render_text(r);
  } else {
    text = doc.dump(2) + "\n";
  }
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + out_path + "'");
    file << text;
  }
  return 0;
}

inline Json timed_report(const LoadedMap& lm, const Invocation& inv) {
  auto start = std::chrono::steady_clock::now();
  Json r = build_report(lm, inv);
  r["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline Json rebuild(const Json& report) {
  LoadedMap lm{map_from_source(report.at("map").at("source")), report.at("map").at("source")};
  return timed_report(lm, invocation_from_json(report.at("config")));
}

/// Exit codes: 0 verdict produced, 1 usage or input error, 2 internal error or failed revalidation.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sampled linearity, affinity and collineation checks for maps between rational spaces", "colline"};
  app.require_subcommand(0, 1);
  Invocation inv;
  std::string format = "json", out_path, revalidate_path, builtin;
  std::vector<std::string> files;

  try {
    inv.probes.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  app.add_option("--probes", inv.probes.count, "probes per check")->capture_default_str();
  app.add_option("--seed", inv.probes.seed, "probe seed (default 0, or COLLINE_SEED)")->capture_default_str();
  app.add_option("--range", inv.probes.range, "sampled scalars are p/q with |p|, q <= R")->capture_default_str();
  app.add_option("--params-per-line", inv.probes.params_per_line, "points sampled per line")->capture_default_str();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--revalidate", revalidate_path, "re-check every witness and certificate in a report file");

  auto with_map_inputs = [&](CLI::App* sub) {
    sub->add_option("files", files, "map files")->check(CLI::ExistingFile);
    sub->add_option("--builtin", builtin, "builtin map, e.g. lemma23:m=2,n=2,e0=0,d0=(0,1)");
    sub->fallthrough();
  };
  CLI::App* classify = app.add_subcommand("classify", "classify each map");
  with_map_inputs(classify);
  bool no_symbolic = false;
  classify->add_flag("--no-symbolic", no_symbolic, "skip the symbolic fast path");
  CLI::App* check = app.add_subcommand("check", "run one named check");
  check->add_option("name", inv.target, "check name")->required();
  with_map_inputs(check);
  CLI::App* cert = app.add_subcommand("certify", "build a line-constellation certificate");
  cert->add_option("kind", inv.target, "homogeneity, additivity or lemma32")->required();
  with_map_inputs(cert);
  std::string a_text, b_text, r_text;
  cert->add_option("--a", a_text, "first point, e.g. (1,0)");
  cert->add_option("--b", b_text, "second point");
  cert->add_option("--r", r_text, "scale factor for homogeneity (default 2)");
  CLI::App* zoo = app.add_subcommand("zoo", "describe a builtin map");
  zoo->add_option("builtin", builtin, "builtin spec")->required();
  zoo->fallthrough();
  std::string rerun_path;
  CLI::App* rerun = app.add_subcommand("rerun", "re-run a report from its embedded config and compare");
  rerun->add_option("report", rerun_path, "report file")->required()->check(CLI::ExistingFile);
  rerun->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!revalidate_path.empty()) {
      Json doc = Json::parse(read_file(revalidate_path));
      std::size_t problems = 0;
      for (const auto& r : reports_in(doc)) {
        for (const auto& p : revalidate_report(r)) {
          err << "revalidate: " << p << "\n";
          ++problems;
        }
      }
      out << (problems ? "revalidation failed: " + std::to_string(problems) + " problem(s)\n" : "revalidation passed\n");
      return problems ? 2 : 0;
    }
    if (rerun->parsed()) {
      Json stored = Json::parse(read_file(rerun_path));
      Json fresh = Json::array();
      for (const auto& r : reports_in(stored)) fresh.push_back(rebuild(r));
      if (!stored.is_array()) fresh = fresh.at(0);
      bool same = without_wall_time(stored).dump() == without_wall_time(fresh).dump();
      out << (same ? "rerun identical\n" : "rerun differs\n");
      return same ? 0 : 2;
    }
    CLI::App* active = nullptr;
    for (CLI::App* s : {classify, check, cert, zoo}) {
      if (s->parsed()) active = s;
    }
    if (!active) {
      err << app.help();
      return 1;
    }
    inv.command = active->get_name();
    inv.probes.validate();
    inv.symbolic = !no_symbolic;
    if (!a_text.empty()) inv.a = Vector::parse(a_text);
    if (!b_text.empty()) inv.b = Vector::parse(b_text);
    if (!r_text.empty()) inv.r = Scalar::parse(r_text);

    std::vector<LoadedMap> maps;
    if (!builtin.empty()) maps.push_back(load_builtin(builtin));
    for (const auto& path : files) {
      for (auto& lm : load_file(path)) maps.push_back(std::move(lm));
    }
    if (maps.empty()) throw UsageError(inv.command + " needs a map file or --builtin");

    Json doc = Json::array();
    for (const auto& lm : maps) doc.push_back(timed_report(lm, inv));
    if (doc.size() == 1) doc = doc.at(0);
    return emit(doc, format, out_path, out);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "malformed report: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace colline::cli
