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

#include "mgfp/schedule.hpp"

#include <cmath>
#include <utility>

namespace mgfp {

StepSchedule StepSchedule::power_law(double rho_alpha, double rho_beta) {
  StepSchedule s;
  s.kind_ = Kind::kPowerLaw;
  s.rho_alpha_ = rho_alpha;
  s.rho_beta_ = rho_beta;
  return s;
}

StepSchedule StepSchedule::constant(double alpha, double beta) {
  StepSchedule s;
  s.kind_ = Kind::kConstant;
  s.alpha_const_ = alpha;
  s.beta_const_ = beta;
  return s;
}

StepSchedule StepSchedule::table(std::vector<double> alpha,
                                 std::vector<double> beta) {
  if (alpha.size() != beta.size())
    throw std::invalid_argument("alpha/beta tables must have equal length");
  StepSchedule s;
  s.kind_ = Kind::kTable;
  s.alpha_table_ = std::move(alpha);
  s.beta_table_ = std::move(beta);
  return s;
}

double StepSchedule::alpha(std::int64_t k) const {
  switch (kind_) {
    case Kind::kPowerLaw:
      return std::pow(static_cast<double>(k + 1), -rho_alpha_);
    case Kind::kConstant:
      return alpha_const_;
    case Kind::kTable:
      if (k < 0 || k >= static_cast<std::int64_t>(alpha_table_.size()))
        throw ScheduleExhausted("alpha table exhausted at k=" +
                                std::to_string(k));
      return alpha_table_[static_cast<size_t>(k)];
  }
  return 0.0;
}

double StepSchedule::beta(std::int64_t k) const {
  switch (kind_) {
    case Kind::kPowerLaw:
      return std::pow(static_cast<double>(k + 1), -rho_beta_);
    case Kind::kConstant:
      return beta_const_;
    case Kind::kTable:
      if (k < 0 || k >= static_cast<std::int64_t>(beta_table_.size()))
        throw ScheduleExhausted("beta table exhausted at k=" +
                                std::to_string(k));
      return beta_table_[static_cast<size_t>(k)];
  }
  return 0.0;
}

ScheduleReport validate_schedule(const StepSchedule& sched) {
  ScheduleReport report;
  using CS = ConditionStatus;

  switch (sched.kind()) {
    case StepSchedule::Kind::kPowerLaw: {
      const double ra = sched.rho_alpha();
      const double rb = sched.rho_beta();
      // p-series facts: (k+1)^{-rho} -> 0 iff rho > 0; sum diverges iff
      // rho <= 1; sum of squares converges iff rho > 1/2.
      report.vanishing = (ra > 0.0 && rb > 0.0) ? CS::kSatisfied : CS::kViolated;
      report.slow_decay =
          (ra <= 1.0 && rb <= 1.0) ? CS::kSatisfied : CS::kViolated;
      report.fast_decay = (ra > 0.5) ? CS::kSatisfied : CS::kViolated;
      report.pointwise_alpha_ge_beta = (rb >= ra);
      report.timescale_limit =
          (rb > ra && report.pointwise_alpha_ge_beta) ? CS::kSatisfied
                                                      : CS::kViolated;
      break;
    }
    case StepSchedule::Kind::kConstant: {
      report.vanishing = CS::kViolated;
      report.slow_decay = CS::kSatisfied;
      report.fast_decay = CS::kViolated;
      report.pointwise_alpha_ge_beta = sched.alpha(0) >= sched.beta(0);
      // beta/alpha is a nonzero constant, so it cannot vanish.
      report.timescale_limit = CS::kViolated;
      break;
    }
    case StepSchedule::Kind::kTable: {
      report.vanishing = CS::kUndecidable;
      report.slow_decay = CS::kUndecidable;
      report.fast_decay = CS::kUndecidable;
      report.timescale_limit = CS::kUndecidable;
      report.pointwise_alpha_ge_beta = true;
      const auto& a = sched.alpha_table();
      const auto& b = sched.beta_table();
      for (size_t k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) {
          report.pointwise_alpha_ge_beta = false;
          break;
        }
      }
      break;
    }
  }
  return report;
}

}  // namespace mgfp
