#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "colline/certificate.hpp"
#include "colline/classify.hpp"
#include "colline/error.hpp"
#include "colline/outcome.hpp"
#include "colline/theorem.hpp"

namespace colline {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Values travel as their canonical text: "3/4" for scalars, "(1, -2)" for vectors.
inline Value value_from_text(const std::string& text) {
  if (text.find('(') != std::string::npos) return Vector::parse(text);
  return Scalar::parse(text);
}

inline Json to_json(const Bindings& b) {
  Json j = Json::object();
  for (const auto& x : b) j[x.name] = to_text(x.value);
  return j;
}

inline Bindings bindings_from_json(const Json& j) {
  Bindings out;
  for (const auto& [name, v] : j.items()) out.push_back(Binding{name, value_from_text(v.get<std::string>())});
  return out;
}

inline Json to_json(const Witness& w) {
  return Json{{"inputs", to_json(w.inputs)}, {"observed", to_json(w.observed)}, {"relation", w.relation},
              {"probe", w.probe_index}};
}

inline Witness witness_from_json(const Json& j) {
  return Witness{bindings_from_json(j.at("inputs")), bindings_from_json(j.at("observed")),
                 j.at("relation").get<std::string>(), j.at("probe").get<std::size_t>()};
}

inline Json to_json(const CheckOutcome& o) {
  Json j{{"check", o.check}, {"verdict", o.passed() ? "pass" : "fail"}, {"probes", o.probes}};
  j["witness"] = o.witness ? to_json(*o.witness) : Json(nullptr);
  j["skipped"] = o.skipped;
  if (!o.note.empty()) j["note"] = o.note;
  return j;
}

inline CheckOutcome outcome_from_json(const Json& j) {
  CheckOutcome o;
  o.check = j.at("check").get<std::string>();
  const std::string verdict = j.at("verdict").get<std::string>();
  if (verdict != "pass" && verdict != "fail") throw Error("unknown verdict '" + verdict + "'");
  o.verdict = verdict == "pass" ? Verdict::pass : Verdict::fail;
  o.probes = j.at("probes").get<std::size_t>();
  o.skipped = j.value("skipped", std::size_t{0});
  if (!j.at("witness").is_null()) o.witness = witness_from_json(j.at("witness"));
  o.note = j.value("note", std::string());
  return o;
}

inline Json to_json(const Certificate& c) {
  Json points = Json::array();
  for (const auto& p : c.points) {
    Json terms = Json::array();
    for (const auto& [coef, name] : p.terms) terms.push_back(Json::array({coef.str(), name}));
    points.push_back(Json{{"name", p.name}, {"x", p.x.str()}, {"fx", p.fx.str()}, {"terms", terms}});
  }
  Json lines = Json::array();
  for (const auto& l : c.lines) {
    Json j{{"name", l.name}, {"from", l.from}, {"to", l.to}, {"origin", l.line.origin().str()},
           {"direction", l.line.direction().str()}};
    j["image_origin"] = l.image ? Json(l.image->origin().str()) : Json(nullptr);
    j["image_direction"] = l.image ? Json(l.image->direction().str()) : Json(nullptr);
    lines.push_back(j);
  }
  Json meets = Json::array();
  for (const auto& m : c.intersections) meets.push_back(Json{{"lines", m.lines}, {"point", m.point}, {"image", m.image}});
  Json parallels = Json::array();
  for (const auto& p : c.parallels) parallels.push_back(Json{{"lines", p.lines}, {"image", p.image}});
  Json equalities = Json::array();
  for (const auto& e : c.equalities) equalities.push_back(Json{{"lhs", e.lhs}, {"rhs", e.rhs}});
  Json j{{"kind", c.kind}, {"points", points}, {"lines", lines}, {"intersections", meets}, {"parallels", parallels},
         {"equalities", equalities}};
  if (c.phi) {
    j["phi"] = Json{{"first", c.phi->first},          {"second", c.phi->second},
                    {"scaled_first", c.phi->scaled_first}, {"scaled_second", c.phi->scaled_second},
                    {"r", c.phi->r.str()},            {"phi_first", c.phi->phi_first.str()},
                    {"phi_second", c.phi->phi_second.str()}};
  } else {
    j["phi"] = nullptr;
  }
  j["conclusion"] = c.conclusion;
  if (!c.note.empty()) j["note"] = c.note;
  j["holds"] = c.holds;
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.kind = j.at("kind").get<std::string>();
  for (const auto& p : j.at("points")) {
    CertPoint pt{p.at("name").get<std::string>(), Vector::parse(p.at("x").get<std::string>()),
                 Vector::parse(p.at("fx").get<std::string>()), {}};
    for (const auto& t : p.at("terms")) pt.terms.emplace_back(Scalar::parse(t.at(0).get<std::string>()), t.at(1).get<std::string>());
    c.points.push_back(std::move(pt));
  }
  for (const auto& l : j.at("lines")) {
    CertLine line{l.at("name").get<std::string>(), l.at("from").get<std::string>(), l.at("to").get<std::string>(),
                  Line(Vector::parse(l.at("origin").get<std::string>()), Vector::parse(l.at("direction").get<std::string>())),
                  std::nullopt};
    if (!l.at("image_origin").is_null()) {
      line.image = Line(Vector::parse(l.at("image_origin").get<std::string>()),
                        Vector::parse(l.at("image_direction").get<std::string>()));
    }
    c.lines.push_back(std::move(line));
  }
  for (const auto& m : j.at("intersections")) {
    c.intersections.push_back(IntersectionFact{m.at("lines").get<std::vector<std::string>>(),
                                               m.at("point").get<std::string>(), m.at("image").get<bool>()});
  }
  for (const auto& p : j.at("parallels")) {
    c.parallels.push_back(ParallelFact{p.at("lines").get<std::vector<std::string>>(), p.at("image").get<bool>()});
  }
  for (const auto& e : j.at("equalities")) {
    c.equalities.push_back(EqualityFact{e.at("lhs").get<std::string>(), e.at("rhs").get<std::vector<std::string>>()});
  }
  if (!j.at("phi").is_null()) {
    const Json& p = j.at("phi");
    c.phi = PhiFact{p.at("first").get<std::string>(),        p.at("second").get<std::string>(),
                    p.at("scaled_first").get<std::string>(), p.at("scaled_second").get<std::string>(),
                    Scalar::parse(p.at("r").get<std::string>()), Scalar::parse(p.at("phi_first").get<std::string>()),
                    Scalar::parse(p.at("phi_second").get<std::string>())};
  }
  c.conclusion = j.at("conclusion").get<std::string>();
  c.note = j.value("note", std::string());
  c.holds = j.at("holds").get<bool>();
  return c;
}

inline Json to_json(const PhiTable& t) {
  Json j = Json::array();
  for (const auto& [r, phi] : t.entries) {
    j.push_back(Json{{"r", r.str()}, {"phi", phi.str()}, {"anchor", t.anchors.at(r).str()}});
  }
  return j;
}

inline Json to_json(const AffineForm& form) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < form.matrix.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < form.matrix.cols(); ++k) row.push_back(form.matrix(i, k).str());
    rows.push_back(row);
  }
  return Json{{"matrix", rows}, {"offset", form.offset.str()}};
}

/// Verdict section; the outcomes and certificates it refers to are stored beside it in the report.
inline Json to_json(const Classification& c) {
  Json j{{"verdict", to_string(c.kind)}};
  j["form"] = c.form ? to_json(*c.form) : Json(nullptr);
  j["failing"] = c.failing ? Json(*c.failing) : Json(nullptr);
  j["reasons"] = c.reasons;
  j["reduced_at"] = c.reduced_at ? Json(c.reduced_at->str()) : Json(nullptr);
  j["phi"] = c.phi ? to_json(*c.phi) : Json(nullptr);
  return j;
}

/// Lossy one-screen rendering of a report.
inline std::string render_text(const Json& report) {
  std::string out;
  const Json& map = report.at("map");
  out += "map " + map.at("name").get<std::string>() + " : " + std::to_string(map.at("input_dim").get<int>()) + " -> " +
         std::to_string(map.at("output_dim").get<int>()) + "\n";
  for (const auto& o : report.value("outcomes", Json::array())) {
    out += "  " + o.at("check").get<std::string>() + ": " + o.at("verdict").get<std::string>() + " (" +
           std::to_string(o.at("probes").get<std::size_t>()) + " probes)";
    if (!o.at("witness").is_null()) {
      std::string inputs;
      for (const auto& [k, v] : o.at("witness").at("inputs").items()) {
        inputs += (inputs.empty() ? "" : ", ") + k + "=" + v.get<std::string>();
      }
      out += " witness " + inputs + ": " + o.at("witness").at("relation").get<std::string>();
    }
    out += "\n";
  }
  for (const auto& c : report.value("certificates", Json::array())) {
    out += "  certificate " + c.at("kind").get<std::string>() + ": " + c.at("conclusion").get<std::string>() + "\n";
  }
  if (report.contains("classification")) {
    const Json& c = report.at("classification");
    out += "verdict: " + c.at("verdict").get<std::string>() + "\n";
    for (const auto& r : c.at("reasons")) out += "  - " + r.get<std::string>() + "\n";
  }
  if (report.contains("error")) out += "error: " + report.at("error").get<std::string>() + "\n";
  return out;
}

}  // namespace colline
