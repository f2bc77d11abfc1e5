// Copyright 2026 The csgopt Authors
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

#include "csgopt/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csgopt/error.hpp"

namespace csgopt {
namespace {

bool all_finite(const Eigen::Ref<const Vector>& v) { return v.allFinite(); }

}  // namespace

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  detail::require(lower.size() == upper.size() && lower.size() > 0,
                  "box bounds must be nonempty and of equal dimension");
  detail::require(all_finite(lower) && all_finite(upper), "box bounds must be finite");
  detail::require((lower.array() < upper.array()).all(), "box requires lower < upper");
  return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::cube(int dim, double lower, double upper) {
  detail::require(dim > 0, "cube dimension must be positive");
  return box(Vector::Constant(dim, lower), Vector::Constant(dim, upper));
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  detail::require(center.size() > 0 && all_finite(center), "ball center must be finite");
  detail::require(std::isfinite(radius) && radius > 0.0, "ball radius must be positive");
  return FeasibleSet(Ball{std::move(center), radius});
}

int FeasibleSet::dim() const {
  if (const Box* b = as_box()) return static_cast<int>(b->lower.size());
  return static_cast<int>(as_ball()->center.size());
}

DesignPoint FeasibleSet::project(const Eigen::Ref<const Vector>& v) const {
  detail::require(v.size() == dim(), "projection: dimension mismatch");
  detail::require(all_finite(v), "projection: non-finite input");
  if (const Box* b = as_box()) {
    return v.cwiseMax(b->lower).cwiseMin(b->upper);
  }
  const Ball& ball = *as_ball();
  const Vector offset = v - ball.center;
  const double norm = offset.norm();
  if (norm <= ball.radius) return v;
  return ball.center + offset * (ball.radius / norm);
}

bool FeasibleSet::contains(const Eigen::Ref<const Vector>& v, double slack) const {
  if (v.size() != dim() || !all_finite(v)) return false;
  return interior_margin(v) >= -slack;
}

double FeasibleSet::interior_margin(const Eigen::Ref<const Vector>& v) const {
  detail::require(v.size() == dim(), "dimension mismatch");
  if (const Box* b = as_box()) {
    return std::min((v - b->lower).minCoeff(), (b->upper - v).minCoeff());
  }
  const Ball& ball = *as_ball();
  return ball.radius - (v - ball.center).norm();
}

DesignPoint FeasibleSet::sample_uniform(Rng& rng) const {
  if (const Box* b = as_box()) {
    Vector u(b->lower.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.uniform(b->lower[i], b->upper[i]);
    return u;
  }
  const Ball& ball = *as_ball();
  const auto d = ball.center.size();
  Vector dir(d);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) dir[i] = rng.normal();
    norm = dir.norm();
  } while (norm == 0.0);
  const double r = ball.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return ball.center + dir * (r / norm);
}

double stationarity_residual(const FeasibleSet& set, const Eigen::Ref<const Vector>& u,
                             const Eigen::Ref<const Vector>& g, double t) {
  detail::require(std::isfinite(t) && t > 0.0, "stationarity residual needs t > 0");
  detail::require(u.size() == g.size(), "stationarity residual: dimension mismatch");
  return (set.project(u - t * g) - u).norm();
}

}  // namespace csgopt
