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

#include "tacforce/lbfgs.hpp"

#include "tacforce/error.hpp"

#include <cmath>
#include <deque>
#include <string>

namespace tacforce
{

LbfgsResult lbfgs_minimize(const Objective & f, Eigen::VectorXd x0, const LbfgsOptions & options)
{
  struct Pair
  {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
  };

  LbfgsResult result;
  result.x = std::move(x0);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(result.x.size());
  double loss = f(result.x, grad);
  if (!std::isfinite(loss) || !grad.allFinite()) {
    throw FitError("non-finite loss at iteration 0");
  }
  result.loss_history.push_back(loss);

  std::deque<Pair> history;
  Eigen::VectorXd direction(result.x.size());
  Eigen::VectorXd trial_x(result.x.size());
  Eigen::VectorXd trial_grad(result.x.size());
  std::vector<double> alpha;

  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() <= options.grad_tol) {
      result.converged = true;
      break;
    }

    // Two-loop recursion.
    direction = -grad;
    alpha.assign(history.size(), 0.0);
    for (std::size_t k = history.size(); k-- > 0; ) {
      alpha[k] = history[k].rho * history[k].s.dot(direction);
      direction -= alpha[k] * history[k].y;
    }
    if (!history.empty()) {
      const Pair & last = history.back();
      direction *= last.s.dot(last.y) / last.y.squaredNorm();
    } else {
      direction /= std::max(1.0, grad.norm());
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * history[k].y.dot(direction);
      direction += (alpha[k] - beta) * history[k].s;
    }

    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      // Lost descent; restart from steepest descent.
      history.clear();
      direction = -grad / std::max(1.0, grad.norm());
      slope = grad.dot(direction);
    }

    double step = 1.0;
    double trial_loss = 0.0;
    bool accepted = false;
    bool any_finite = false;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      trial_x = result.x + step * direction;
      trial_loss = f(trial_x, trial_grad);
      const bool finite = std::isfinite(trial_loss) && trial_grad.allFinite();
      any_finite = any_finite || finite;
      if (finite && trial_loss <= loss + options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!any_finite) {
      throw FitError("non-finite loss at iteration " + std::to_string(iter + 1));
    }
    if (!accepted || !(trial_loss < loss)) {
      break;
    }

    Pair p{trial_x - result.x, trial_grad - grad, 0.0};
    const double sy = p.s.dot(p.y);
    if (sy > 1e-12 * p.s.norm() * p.y.norm()) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (static_cast<int>(history.size()) > options.memory) {
        history.pop_front();
      }
    }

    const double decrease = loss - trial_loss;
    result.x.swap(trial_x);
    grad.swap(trial_grad);
    loss = trial_loss;
    result.loss_history.push_back(loss);
    if (decrease <= options.rel_ftol * std::max(1.0, std::abs(loss))) {
      ++iter;
      result.converged = true;
      break;
    }
  }

  result.loss = loss;
  result.grad_norm = grad.lpNorm<Eigen::Infinity>();
  result.iterations = iter;
  if (result.grad_norm <= options.grad_tol) {
    result.converged = true;
  }
  return result;
}

}  // namespace tacforce
