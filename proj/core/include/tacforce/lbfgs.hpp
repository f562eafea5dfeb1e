// Copyright 2026 The tacforce Authors
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

#ifndef TACFORCE__LBFGS_HPP_
#define TACFORCE__LBFGS_HPP_

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace tacforce
{

/// f(x), writing the gradient into grad (already sized like x).
using Objective = std::function<double (const Eigen::VectorXd & x, Eigen::VectorXd & grad)>;

struct LbfgsOptions
{
  int max_iter{500};
  double grad_tol{1e-6};      ///< stop when |grad|_inf <= grad_tol
  double rel_ftol{1e-14};     ///< stop when the accepted decrease is below rel_ftol * max(1, |f|)
  int memory{10};
  int max_backtracks{50};
  double armijo{1e-4};
};

struct LbfgsResult
{
  Eigen::VectorXd x;
  double loss{0.0};
  double grad_norm{0.0};
  int iterations{0};
  bool converged{false};
  /// Loss after every accepted step, starting with the initial point.
  std::vector<double> loss_history;
};

/**
 * Limited-memory BFGS with a backtracking Armijo line search.
 *
 * Every accepted step strictly decreases f. Trial points with a non-finite
 * loss are backtracked; a non-finite loss at the starting point throws
 * FitError naming iteration 0.
 */
LbfgsResult lbfgs_minimize(const Objective & f, Eigen::VectorXd x0, const LbfgsOptions & options = {});

}  // namespace tacforce

#endif  // TACFORCE__LBFGS_HPP_
