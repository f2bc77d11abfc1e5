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

#ifndef CSGOPT_FEASIBLE_SET_HPP
#define CSGOPT_FEASIBLE_SET_HPP

#include <variant>

#include <Eigen/Core>

#include "csgopt/rng.hpp"

namespace csgopt {

using Vector = Eigen::VectorXd;
/// Optimization variable u in the admissible set.
using DesignPoint = Eigen::VectorXd;
/// Realization x of the random parameter.
using ParameterSample = Eigen::VectorXd;

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius;
};

/// Compact convex admissible set with a closed-form Euclidean projection.
class FeasibleSet {
 public:
  /// Throws InvalidInput unless lower[i] < upper[i] for every coordinate.
  static FeasibleSet box(Vector lower, Vector upper);
  /// Same bounds in every coordinate.
  static FeasibleSet cube(int dim, double lower, double upper);
  /// Throws InvalidInput unless radius > 0.
  static FeasibleSet ball(Vector center, double radius);

  int dim() const;
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  const Box* as_box() const { return std::get_if<Box>(&shape_); }
  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }

  /// Euclidean-nearest point of the set. Points inside the set are returned
  /// unchanged; a ball projects its own center to itself.
  DesignPoint project(const Eigen::Ref<const Vector>& v) const;

  bool contains(const Eigen::Ref<const Vector>& v, double slack = 1e-12) const;

  /// Smallest distance from an interior point to the boundary (negative
  /// outside the set).
  double interior_margin(const Eigen::Ref<const Vector>& v) const;

  /// Uniformly distributed point of the set.
  DesignPoint sample_uniform(Rng& rng) const;

 private:
  explicit FeasibleSet(std::variant<Box, Ball> shape) : shape_(std::move(shape)) {}

  std::variant<Box, Ball> shape_;
};

/// ||P(u - t g) - u||; zero exactly at fixed points of the projected-gradient
/// map for this g and t.
double stationarity_residual(const FeasibleSet& set, const Eigen::Ref<const Vector>& u,
                             const Eigen::Ref<const Vector>& g, double t);

}  // namespace csgopt

#endif  // CSGOPT_FEASIBLE_SET_HPP
