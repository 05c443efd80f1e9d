#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colline/error.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"

namespace colline {

using Value = std::variant<Scalar, Vector>;

inline std::string to_text(const Value& v) {
  return std::visit([](const auto& x) { return x.str(); }, v);
}

struct Binding {
  std::string name;
  Value value;

  friend bool operator==(const Binding&, const Binding&) = default;
};

using Bindings = std::vector<Binding>;

inline const Value& lookup(const Bindings& b, const std::string& name) {
  for (const auto& x : b) {
    if (x.name == name) return x.value;
  }
  throw Error("witness has no input named '" + name + "'");
}

inline const Vector& vector_at(const Bindings& b, const std::string& name) {
  const Value& v = lookup(b, name);
  if (!std::holds_alternative<Vector>(v)) throw Error("witness input '" + name + "' is not a vector");
  return std::get<Vector>(v);
}

inline const Scalar& scalar_at(const Bindings& b, const std::string& name) {
  const Value& v = lookup(b, name);
  if (!std::holds_alternative<Scalar>(v)) throw Error("witness input '" + name + "' is not a scalar");
  return std::get<Scalar>(v);
}

/// Exact inputs on which a hypothesis fails, plus what was observed there.
struct Witness {
  Bindings inputs;
  Bindings observed;
  std::string relation;
  std::size_t probe_index = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Verdict { pass, fail };

/// Result of one sampled predicate: Pass means no counterexample among `probes` probes.
struct CheckOutcome {
  std::string check;
  Verdict verdict = Verdict::pass;
  std::size_t probes = 0;
  std::size_t skipped = 0;
  std::optional<Witness> witness;
  std::string note;

  bool passed() const { return verdict == Verdict::pass; }
  bool failed() const { return verdict == Verdict::fail; }
};

}  // namespace colline
