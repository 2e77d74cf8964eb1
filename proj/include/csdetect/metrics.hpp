// include/csdetect/metrics.hpp

// Copyright 2026 The csdetect Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CSDETECT_METRICS_H_
#define CSDETECT_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csdetect/decision.hpp"
#include "csdetect/types.hpp"

namespace csd {

// Frame counters behind the duration-based miss metric.  Rates are exposed
// as optionals: a language absent from the reference has no rate rather
// than a fake zero.
struct MissRates {
  std::int64_t missed_l1_frames = 0;
  std::int64_t missed_l2_frames = 0;
  std::int64_t ref_l1_frames = 0;
  std::int64_t ref_l2_frames = 0;

  std::optional<double> missed_l1() const;
  std::optional<double> missed_l2() const;
  MissRates& operator+=(const MissRates& other);
};

// missed_l1 counts reference L1 frames whose hypothesis label is not L1,
// over all reference L1 frames; symmetric for L2.  Silence reference frames
// take part in neither numerator nor denominator.
MissRates missed_time(const FrameLabelSequence& hyp,
                      const FrameLabelSequence& ref);

// Pools numerators and denominators across utterances before dividing
// (frame-weighted, not utterance-averaged).
MissRates missed_time_corpus(std::span<const FrameLabelSequence> hyp,
                             std::span<const FrameLabelSequence> ref);

enum class Aggregation { kPooled, kAveraged };

struct DetPoint {
  PriorWeights weights;
  MissRates counts;        // pooled frame counters at this weight
  double missed_l1 = 0.0;  // operative rates per the chosen aggregation
  double missed_l2 = 0.0;
};

struct DetCurve {
  DecisionRule rule = DecisionRule::kMaxLanguage;
  std::vector<DetPoint> points;  // ascending w_l1

  // True when missed_l1 is non-increasing and missed_l2 non-decreasing
  // across the grid.
  bool miss_rates_monotone() const;
};

struct EerResult {
  double eer;
  PriorWeights w_at_eer;
  bool interpolated;
};

// n weights w_l1 = sigmoid(x) with x uniform on [-6, 6]: denser near the
// extremes where DET curves bend.
std::vector<PriorWeights> logit_weight_grid(std::size_t n,
                                            double w_sil = 1.0);

// One DET point from already-decided label sequences; shared by the
// posterior sweep and the baseline path that evaluates external alignments.
DetPoint evaluate_operating_point(const PriorWeights& weights,
                                  std::span<const FrameLabelSequence> hyp,
                                  std::span<const FrameLabelSequence> ref,
                                  Aggregation agg = Aggregation::kPooled);

// For each grid weight: apply_language_prior, decide per `rule`, then the
// corpus-level miss rates.  Matrices must be row-normalized and positionally
// matched with `refs`.  Rule must be kMaxPhone or kMaxLanguage.
DetCurve det_sweep(std::span<const PosteriorMatrix> normalized,
                   const PhoneInventory& inventory,
                   std::span<const FrameLabelSequence> refs, DecisionRule rule,
                   std::span<const PriorWeights> grid,
                   Aggregation agg = Aggregation::kPooled);

// Equal error rate from the miss-rate crossing.  An exact zero of
// missed_l1 - missed_l2 yields that point's rate; otherwise both rate
// series are linearly interpolated in w_l1 between the bracketing pair.
EerResult eer(const DetCurve& curve);

// CSV with header w_l1,missed_l1,missed_l2 and 6-decimal fixed point.
std::string det_curve_csv(const DetCurve& curve);

}  // namespace csd

#endif  // CSDETECT_METRICS_H_
