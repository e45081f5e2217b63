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

#include "metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.h"

namespace mealab {

double SharpnessStats::bin_lower(size_t bin) const {
  const double lo = 1.0 / static_cast<double>(num_classes);
  return lo + (1.0 - lo) * static_cast<double>(bin) /
                  static_cast<double>(histogram.size());
}

double SharpnessStats::bin_upper(size_t bin) const { return bin_lower(bin + 1); }

size_t MaxPosteriorBin(double max_probability, size_t num_classes,
                       size_t num_bins) {
  const double lo = 1.0 / static_cast<double>(num_classes);
  const double pos =
      (max_probability - lo) / (1.0 - lo) * static_cast<double>(num_bins);
  const auto bin = static_cast<long>(std::floor(pos));
  return static_cast<size_t>(
      std::clamp<long>(bin, 0, static_cast<long>(num_bins) - 1));
}

SharpnessStats MaxPosteriorStats(std::span<const Posterior> posteriors,
                                 size_t num_bins) {
  if (posteriors.empty()) {
    Fail(ErrorCode::kValidation, "max-posterior stats of an empty set");
  }
  if (num_bins == 0) Fail(ErrorCode::kInvalidArgument, "num_bins must be > 0");
  SharpnessStats stats;
  stats.num_classes = posteriors.front().num_classes();
  stats.histogram.assign(num_bins, 0);
  std::vector<double> maxima;
  maxima.reserve(posteriors.size());
  for (const Posterior& p : posteriors) {
    if (p.num_classes() != stats.num_classes) {
      Fail(ErrorCode::kValidation, "posteriors have mixed class counts");
    }
    const double m = p.Max();
    maxima.push_back(m);
    ++stats.histogram[MaxPosteriorBin(m, stats.num_classes, num_bins)];
  }
  stats.mean = Mean(maxima);
  std::sort(maxima.begin(), maxima.end());
  const size_t n = maxima.size();
  stats.median = n % 2 == 1 ? maxima[n / 2]
                            : 0.5 * (maxima[n / 2 - 1] + maxima[n / 2]);
  return stats;
}

double AttributeStd(const Dataset& ds, const std::string& attribute) {
  if (!ds.HasAttribute(attribute)) {
    Fail(ErrorCode::kValidation, "unknown attribute '" + attribute + "'");
  }
  std::vector<double> counts(2, 0.0);
  for (const Document& doc : ds.documents) {
    const int v = doc.attribute(attribute);
    if (v == kUnknownAttribute) continue;
    if (static_cast<size_t>(v) >= counts.size()) counts.resize(v + 1, 0.0);
    counts[static_cast<size_t>(v)] += 1.0;
  }
  const double mean = Mean(counts);
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  return std::sqrt(var / static_cast<double>(counts.size()));
}

namespace {

std::vector<double> Ranks(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanCorrelation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "spearman needs two equal-length series of >= 2 points");
  }
  const auto rx = Ranks(x);
  const auto ry = Ranks(y);
  const double mx = Mean(rx);
  const double my = Mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace mealab
