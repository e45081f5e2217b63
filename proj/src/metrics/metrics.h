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

#ifndef MEALAB_METRICS_METRICS_H_
#define MEALAB_METRICS_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "corpus/dataset.h"
#include "modeling/model.h"

namespace mealab {

struct SharpnessStats {
  double mean = 0.0;
  double median = 0.0;
  size_t num_classes = 0;
  // Equal-width bins over [1/K, 1]; the last bin is closed.
  std::vector<size_t> histogram;

  double bin_lower(size_t bin) const;
  double bin_upper(size_t bin) const;
};

// Index of the equal-width bin over [1/K, 1] holding `max_probability`;
// values outside the range land in the end bins.
size_t MaxPosteriorBin(double max_probability, size_t num_classes,
                       size_t num_bins);

// Statistics of the per-posterior maximum probability. Throws kValidation on
// empty input or mixed K.
SharpnessStats MaxPosteriorStats(std::span<const Posterior> posteriors,
                                 size_t num_bins = 10);

// Population standard deviation of the attribute's value-count histogram.
// Binary attributes always count both values, so (100, 0) gives 50. Unknown
// values are skipped. Throws kValidation for undeclared attributes.
double AttributeStd(const Dataset& ds, const std::string& attribute);

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either side is constant. Throws kInvalidArgument on size mismatch or
// fewer than two points.
double SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

double Mean(std::span<const double> values);

}  // namespace mealab

#endif  // MEALAB_METRICS_METRICS_H_
