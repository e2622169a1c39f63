// Copyright 2026 The mgfp Authors. All rights reserved.
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

#ifndef MGFP_SCHEDULE_HPP_
#define MGFP_SCHEDULE_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mgfp {

struct ScheduleExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step-size pair (alpha_k for beliefs, beta_k for Q-estimates).
class StepSchedule {
 public:
  enum class Kind { kPowerLaw, kConstant, kTable };

  // alpha_k = (k+1)^{-rho_alpha}, beta_k = (k+1)^{-rho_beta}.
  static StepSchedule power_law(double rho_alpha, double rho_beta);
  static StepSchedule constant(double alpha, double beta);
  static StepSchedule table(std::vector<double> alpha, std::vector<double> beta);

  Kind kind() const { return kind_; }
  double rho_alpha() const { return rho_alpha_; }
  double rho_beta() const { return rho_beta_; }
  const std::vector<double>& alpha_table() const { return alpha_table_; }
  const std::vector<double>& beta_table() const { return beta_table_; }

  // Throw ScheduleExhausted past the end of a table schedule.
  double alpha(std::int64_t k) const;
  double beta(std::int64_t k) const;

 private:
  Kind kind_ = Kind::kPowerLaw;
  double rho_alpha_ = 0.6;
  double rho_beta_ = 0.9;
  double alpha_const_ = 0.0;
  double beta_const_ = 0.0;
  std::vector<double> alpha_table_;
  std::vector<double> beta_table_;
};

enum class ConditionStatus { kSatisfied, kViolated, kUndecidable };

// One flag per condition of the two-timescale step-size requirements:
//   (i)   alpha_k -> 0 and beta_k -> 0
//   (ii)  sum alpha_k = inf and sum beta_k = inf
//   (iii) sum alpha_k^2 < inf
//   (iv)  alpha_k >= beta_k for all k and beta_k/alpha_k -> 0
struct ScheduleReport {
  ConditionStatus vanishing = ConditionStatus::kUndecidable;
  ConditionStatus slow_decay = ConditionStatus::kUndecidable;
  ConditionStatus fast_decay = ConditionStatus::kUndecidable;
  ConditionStatus timescale_limit = ConditionStatus::kUndecidable;
  // Pointwise alpha_k >= beta_k; for tables checked on the available prefix.
  bool pointwise_alpha_ge_beta = false;

  bool all_satisfied() const {
    return vanishing == ConditionStatus::kSatisfied &&
           slow_decay == ConditionStatus::kSatisfied &&
           fast_decay == ConditionStatus::kSatisfied &&
           timescale_limit == ConditionStatus::kSatisfied &&
           pointwise_alpha_ge_beta;
  }
};

ScheduleReport validate_schedule(const StepSchedule& sched);

}  // namespace mgfp

#endif  // MGFP_SCHEDULE_HPP_
