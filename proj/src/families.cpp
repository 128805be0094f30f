// Copyright 2026 The pgcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pgcore/families.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pgcore/error.hpp"

namespace pgcore {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidEconomy, what);
}

void check_square(const Matrix& w, std::size_t n) {
  if (w.size() != n) invalid("W must have n rows");
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i].size() != n) invalid("W must be n x n");
    for (std::size_t j = 0; j < n; ++j) {
      const double x = w[i][j];
      if (!std::isfinite(x) || x < 0.0) invalid("W entries must be finite and >= 0");
      if (i != j && x <= 0.0) {
        std::ostringstream os;
        os << "W[" << i << "][" << j << "] must be > 0 for positive externalities";
        invalid(os.str());
      }
    }
  }
}

void check_vector(const Vector& v, std::size_t n, const char* name, bool strictly_positive) {
  if (v.size() != n) invalid(std::string(name) + " must have n entries");
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0 || (strictly_positive && x == 0.0)) {
      invalid(std::string(name) + (strictly_positive ? " entries must be > 0"
                                                     : " entries must be >= 0"));
    }
  }
}

double row_dot(const Vector& row, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
  return s;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kAffine: return "affine";
    case Family::kQuadratic: return "quadratic";
    case Family::kLogAgg: return "logagg";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  if (name == "affine") return Family::kAffine;
  if (name == "quadratic") return Family::kQuadratic;
  if (name == "logagg") return Family::kLogAgg;
  return std::nullopt;
}

void check_spec(const EconomySpec& spec) {
  if (spec.n == 0) invalid("n must be >= 1");
  check_square(spec.weights, spec.n);
  switch (spec.family) {
    case Family::kAffine:
      if (!spec.curvature.empty() || !spec.alpha.empty() || !spec.beta.empty()) {
        invalid("affine economies take only W");
      }
      break;
    case Family::kQuadratic:
      if (!spec.alpha.empty() || !spec.beta.empty()) invalid("quadratic economies take W and c");
      check_vector(spec.curvature, spec.n, "c", false);
      break;
    case Family::kLogAgg:
      if (!spec.curvature.empty()) invalid("logagg economies take alpha, W and beta");
      check_vector(spec.alpha, spec.n, "alpha", true);
      check_vector(spec.beta, spec.n, "beta", false);
      break;
  }
}

UtilityOracle make_affine(Matrix weights) {
  const std::size_t n = weights.size();
  EconomySpec spec;
  spec.n = n;
  spec.family = Family::kAffine;
  spec.weights = weights;
  check_spec(spec);
  auto w = std::make_shared<const Matrix>(std::move(weights));
  auto value = [w](std::span<const double> a) {
    Vector u(w->size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = row_dot((*w)[i], a);
    return u;
  };
  auto derivative = [w](std::span<const double>, std::span<const double> v) {
    Vector d(w->size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = row_dot((*w)[i], v);
    return d;
  };
  return UtilityOracle(n, value, derivative);
}

UtilityOracle make_quadratic(Matrix weights, Vector curvature) {
  const std::size_t n = weights.size();
  EconomySpec spec;
  spec.n = n;
  spec.family = Family::kQuadratic;
  spec.weights = weights;
  spec.curvature = curvature;
  check_spec(spec);
  auto w = std::make_shared<const Matrix>(std::move(weights));
  auto c = std::make_shared<const Vector>(std::move(curvature));
  auto value = [w, c](std::span<const double> a) {
    Vector u(w->size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = row_dot((*w)[i], a) - (*c)[i] * a[i] * a[i];
    }
    return u;
  };
  auto derivative = [w, c](std::span<const double> a, std::span<const double> v) {
    Vector d(w->size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = row_dot((*w)[i], v) - 2.0 * (*c)[i] * a[i] * v[i];
    }
    return d;
  };
  return UtilityOracle(n, value, derivative);
}

UtilityOracle make_logagg(Vector alpha, Matrix weights, Vector beta) {
  const std::size_t n = weights.size();
  EconomySpec spec;
  spec.n = n;
  spec.family = Family::kLogAgg;
  spec.weights = weights;
  spec.alpha = alpha;
  spec.beta = beta;
  check_spec(spec);
  auto w = std::make_shared<const Matrix>(std::move(weights));
  auto al = std::make_shared<const Vector>(std::move(alpha));
  auto be = std::make_shared<const Vector>(std::move(beta));
  auto value = [w, al, be](std::span<const double> a) {
    Vector u(w->size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = (*al)[i] * std::log1p(row_dot((*w)[i], a)) - (*be)[i] * a[i];
    }
    return u;
  };
  auto derivative = [w, al, be](std::span<const double> a, std::span<const double> v) {
    Vector d(w->size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double level = 1.0 + row_dot((*w)[i], a);
      d[i] = (*al)[i] * row_dot((*w)[i], v) / level - (*be)[i] * v[i];
    }
    return d;
  };
  return UtilityOracle(n, value, derivative);
}

UtilityOracle make_oracle(const EconomySpec& spec) {
  check_spec(spec);
  switch (spec.family) {
    case Family::kAffine: return make_affine(spec.weights);
    case Family::kQuadratic: return make_quadratic(spec.weights, spec.curvature);
    case Family::kLogAgg: return make_logagg(spec.alpha, spec.weights, spec.beta);
  }
  invalid("unknown family");
}

EconomySpec random_economy(Family family, std::size_t n, std::uint64_t seed) {
  if (n == 0) invalid("n must be >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  EconomySpec spec;
  spec.n = n;
  spec.family = family;
  spec.seed = seed;
  spec.weights.assign(n, Vector(n, 0.0));

  switch (family) {
    case Family::kAffine:
      for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          spec.weights[i][j] = i == j ? uniform(0.0, 1.0) : uniform(0.05, 1.0);
          total += spec.weights[i][j];
        }
        // Row sums of one keep u inside [0,1] on the whole box.
        for (double& x : spec.weights[i]) x /= total;
      }
      break;
    case Family::kQuadratic:
      spec.curvature.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          spec.weights[i][j] = i == j ? uniform(0.0, 0.8) : uniform(0.05, 0.6);
        }
        spec.curvature[i] = uniform(0.3, 1.2);
      }
      break;
    case Family::kLogAgg:
      spec.alpha.resize(n);
      spec.beta.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          spec.weights[i][j] = i == j ? uniform(0.2, 1.0) : uniform(0.1, 1.0);
        }
        spec.alpha[i] = uniform(0.5, 1.5);
        spec.beta[i] = spec.alpha[i] * uniform(0.2, 0.8);
      }
      break;
  }
  return spec;
}

}  // namespace pgcore
