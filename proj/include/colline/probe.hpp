#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "colline/error.hpp"
#include "colline/geometry.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"

namespace colline {

/// Probe budget and sampling parameters. Identical configs give identical probe streams.
struct ProbeConfig {
  std::uint64_t seed = 0;
  std::size_t count = 500;
  /// Sampled scalars are p/q with |p| <= range, 1 <= q <= range.
  std::int64_t range = 12;
  std::size_t params_per_line = 5;

  void validate() const {
    if (count < 1) throw PreconditionError("probe count must be positive");
    if (range < 1) throw PreconditionError("coordinate range must be positive");
    if (params_per_line < 3) throw PreconditionError("params per line must be at least 3");
  }
};

/// One independent random stream per check, addressable by probe index.
enum class Stream : std::uint32_t {
  homogeneity = 1, additivity, line_image, line_injectivity, ratio, independence, affine_independence,
  betweenness_cor43, betweenness_prop44, scalar_multiplicative, scalar_monotone, plane_image,
  parallelism, phi, certificates, dichotomy, reduced, theorem29,
};

/// Sampler for probe `index` of a stream. Only raw engine output is used, so the sequence is the
/// same on every standard library.
class ProbeRng {
 public:
  ProbeRng(const ProbeConfig& cfg, Stream stream, std::uint64_t index) : range_(cfg.range) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
  }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % span);
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  Scalar scalar() { return Scalar(uniform(-range_, range_), uniform(1, range_)); }

  Scalar nonzero_scalar() {
    while (true) {
      Scalar s = scalar();
      if (!s.is_zero()) return s;
    }
  }

  /// Uniformly drawn p/q strictly between 0 and 1, 2 <= q <= max(range, 2).
  Scalar unit_open() {
    std::int64_t q = uniform(2, std::max<std::int64_t>(range_, 2));
    return Scalar(uniform(1, q - 1), q);
  }

  Vector vector(std::size_t dim) {
    std::vector<Scalar> c;
    c.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) c.push_back(scalar());
    return Vector(std::move(c));
  }

  Vector nonzero_vector(std::size_t dim) {
    while (true) {
      Vector v = vector(dim);
      if (!v.is_zero()) return v;
    }
  }

  Line line(std::size_t dim) { return Line(vector(dim), nonzero_vector(dim)); }

  /// {0, 1, -1} followed by distinct random parameters, `count` in total.
  std::vector<Scalar> line_params(std::size_t count) {
    std::vector<Scalar> t = {Scalar(0), Scalar(1), Scalar(-1)};
    std::size_t attempts = 0;
    while (t.size() < count && attempts < 64 * count) {
      ++attempts;
      Scalar s = scalar();
      if (std::find(t.begin(), t.end(), s) == t.end()) t.push_back(s);
    }
    t.resize(std::min(t.size(), count));
    return t;
  }

 private:
  std::int64_t range_;
  std::mt19937_64 engine_;
};

}  // namespace colline
