// Copyright 2026 The MEALab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEALAB_EXPERIMENT_REPORT_H_
#define MEALAB_EXPERIMENT_REPORT_H_

#include <string>

#include "experiment/config.h"
#include "experiment/runner.h"

namespace mealab {

inline constexpr int kCsvSchemaVersion = 1;

std::string FormatMeaCsv(const ExperimentReport& report,
                         const ExperimentConfig& cfg);
std::string FormatAiaCsv(const ExperimentReport& report);
// Rows of the designated sweep plan only: one per (defense, seed).
std::string FormatDefenseSweepCsv(const ExperimentReport& report,
                                  const ExperimentConfig& cfg);
std::string FormatSharpnessCsv(const ExperimentReport& report);
// Means over the successful seeds of each (plan, defense).
std::string FormatSummaryCsv(const ExperimentReport& report);

}  // namespace mealab

#endif  // MEALAB_EXPERIMENT_REPORT_H_
