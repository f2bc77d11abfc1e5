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

#include "csgopt/problem.hpp"

#include "csgopt/error.hpp"

namespace csgopt {

void check_design_point(const StochasticProblem& problem, const Eigen::Ref<const Vector>& u) {
  detail::require(u.size() == problem.dim_design(), "design point has wrong dimension");
  detail::require(u.allFinite(), "design point has non-finite coordinates");
}

}  // namespace csgopt
