// src/decision.cpp

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

#include "csdetect/decision.hpp"

#include <array>
#include <string>

#include "csdetect/errors.hpp"
#include "csdetect/posterior.hpp"
#include "csdetect/segmentation.hpp"

namespace csd {

std::string_view rule_name(DecisionRule rule) {
  switch (rule) {
    case DecisionRule::kBaselineAlignment:
      return "baseline";
    case DecisionRule::kMaxPhone:
      return "max-phone";
    case DecisionRule::kMaxLanguage:
      return "max-language";
  }
  return "max-language";
}

std::optional<DecisionRule> parse_rule(std::string_view name) {
  if (name == "baseline") return DecisionRule::kBaselineAlignment;
  if (name == "max-phone") return DecisionRule::kMaxPhone;
  if (name == "max-language") return DecisionRule::kMaxLanguage;
  return std::nullopt;
}

namespace {

// Shared tie handling: keep the previous label when it is tied for the
// maximum, otherwise take the class of the lowest tied index.  The
// hysteresis discourages spurious switches on exactly tied frames.
LanguageClass break_tie(const std::array<bool, kNumClasses>& tied,
                        LanguageClass lowest_index_class,
                        const LanguageClass* previous) {
  if (previous != nullptr && tied[class_index(*previous)]) return *previous;
  return lowest_index_class;
}

}  // namespace

FrameLabelSequence decide_max_phone(const PosteriorMatrix& matrix,
                                    const PhoneInventory& inventory) {
  if (matrix.num_phones() != inventory.size()) {
    throw InputError("decide_max_phone: matrix for utterance '" +
                     matrix.utterance_id() + "' does not match the inventory");
  }
  FrameLabelSequence out;
  out.utterance_id = matrix.utterance_id();
  out.frame_period = matrix.frame_period();
  out.labels.resize(matrix.num_frames());

  for (std::size_t t = 0; t < matrix.num_frames(); ++t) {
    auto row = matrix.row(t);
    double best = row[0];
    for (std::size_t p = 1; p < row.size(); ++p) {
      if (row[p] > best) best = row[p];
    }
    std::array<bool, kNumClasses> tied = {false, false, false};
    LanguageClass first_max_class = LanguageClass::kSil;
    bool seen = false;
    std::size_t num_tied_classes = 0;
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (row[p] == best) {
        LanguageClass c = inventory.class_of(p);
        if (!seen) {
          first_max_class = c;
          seen = true;
        }
        if (!tied[class_index(c)]) {
          tied[class_index(c)] = true;
          ++num_tied_classes;
        }
      }
    }
    if (num_tied_classes == 1) {
      out.labels[t] = first_max_class;
    } else {
      const LanguageClass* prev = (t > 0) ? &out.labels[t - 1] : nullptr;
      out.labels[t] = break_tie(tied, first_max_class, prev);
    }
  }
  return out;
}

FrameLabelSequence decide_max_language(const LanguagePosteriorMatrix& matrix) {
  if (matrix.rows.empty()) {
    throw InputError("decide_max_language: empty matrix for utterance '" +
                     matrix.utterance_id + "'");
  }
  FrameLabelSequence out;
  out.utterance_id = matrix.utterance_id;
  out.frame_period = matrix.frame_period;
  out.labels.resize(matrix.rows.size());

  for (std::size_t t = 0; t < matrix.rows.size(); ++t) {
    const auto& row = matrix.rows[t];
    double best = row[0];
    for (std::size_t c = 1; c < kNumClasses; ++c) {
      if (row[c] > best) best = row[c];
    }
    std::array<bool, kNumClasses> tied = {false, false, false};
    LanguageClass first_max_class = LanguageClass::kSil;
    bool seen = false;
    std::size_t num_tied = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (row[c] == best) {
        tied[c] = true;
        ++num_tied;
        if (!seen) {
          first_max_class = kClassOrder[c];
          seen = true;
        }
      }
    }
    if (num_tied == 1) {
      out.labels[t] = first_max_class;
    } else {
      const LanguageClass* prev = (t > 0) ? &out.labels[t - 1] : nullptr;
      out.labels[t] = break_tie(tied, first_max_class, prev);
    }
  }
  return out;
}

FrameLabelSequence labels_from_alignment(const SegmentSequence& alignment,
                                         double frame_period,
                                         std::size_t total_frames,
                                         std::string_view utterance_id) {
  return segments_to_frames(alignment, frame_period, total_frames,
                            utterance_id);
}

FrameLabelSequence decide(const PosteriorMatrix& normalized,
                          const PhoneInventory& inventory,
                          DecisionRule rule) {
  switch (rule) {
    case DecisionRule::kMaxPhone:
      return decide_max_phone(normalized, inventory);
    case DecisionRule::kMaxLanguage:
      return decide_max_language(language_posteriors(normalized, inventory));
    case DecisionRule::kBaselineAlignment:
      break;
  }
  throw InputError(
      "the baseline rule decides from time alignments, not posteriors");
}

}  // namespace csd
