// include/csdetect/decision.hpp

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

#ifndef CSDETECT_DECISION_H_
#define CSDETECT_DECISION_H_

#include <cstddef>
#include <optional>
#include <string_view>

#include "csdetect/types.hpp"

namespace csd {

// The three ways of turning model output into per-frame language labels.
enum class DecisionRule { kBaselineAlignment, kMaxPhone, kMaxLanguage };

// "baseline", "max-phone" or "max-language".
std::string_view rule_name(DecisionRule rule);
std::optional<DecisionRule> parse_rule(std::string_view name);

// Per frame, the label is the class of the phone column with the highest
// posterior.  Exact ties keep the previous frame's label when it is among
// the tied classes; otherwise (and on the first frame) the lowest inventory
// index wins.  Expects a row-normalized matrix.
FrameLabelSequence decide_max_phone(const PosteriorMatrix& matrix,
                                    const PhoneInventory& inventory);

// Per frame, the label is the argmax over the three class posteriors.
// Ties resolve like decide_max_phone, with the fixed class order
// L1 < L2 < SIL as the fallback.
FrameLabelSequence decide_max_language(const LanguagePosteriorMatrix& matrix);

// Frame labels from a time-aligned, language-tagged hypothesis.  Frame f
// covers [f*dt, (f+1)*dt) and takes the class of the segment containing its
// midpoint; frames covered by no segment are silence.
FrameLabelSequence labels_from_alignment(const SegmentSequence& alignment,
                                         double frame_period,
                                         std::size_t total_frames,
                                         std::string_view utterance_id = {});

// Dispatch for the posterior-driven rules; the baseline rule decides from
// alignments and is rejected here.
FrameLabelSequence decide(const PosteriorMatrix& normalized,
                          const PhoneInventory& inventory, DecisionRule rule);

}  // namespace csd

#endif  // CSDETECT_DECISION_H_
