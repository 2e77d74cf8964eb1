// include/csdetect/types.hpp

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

#ifndef CSDETECT_TYPES_H_
#define CSDETECT_TYPES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csd {

// Frame-level class of a phone or of a decision.  Silence is a third class
// next to the two languages; it never counts as a language in metrics.
enum class LanguageClass : std::uint8_t { kL1 = 0, kL2 = 1, kSil = 2 };

inline constexpr std::size_t kNumClasses = 3;

// Deterministic tie-break order for classes: L1 < L2 < SIL.
inline constexpr std::array<LanguageClass, kNumClasses> kClassOrder = {
    LanguageClass::kL1, LanguageClass::kL2, LanguageClass::kSil};

inline constexpr std::size_t class_index(LanguageClass c) {
  return static_cast<std::size_t>(c);
}

struct Phone {
  std::string name;
  LanguageClass cls = LanguageClass::kSil;
};

// The phone set with a language tag per phone plus the two language names.
// Immutable after construction; the constructor enforces unique non-empty
// phone names and at least one phone per class.
class PhoneInventory {
 public:
  PhoneInventory(std::vector<Phone> phones, std::string l1_name,
                 std::string l2_name);

  std::size_t size() const { return phones_.size(); }
  const std::vector<Phone>& phones() const { return phones_; }
  const Phone& phone(std::size_t i) const { return phones_[i]; }
  LanguageClass class_of(std::size_t i) const { return phones_[i].cls; }

  const std::string& l1_name() const { return l1_name_; }
  const std::string& l2_name() const { return l2_name_; }

  // The language name for kL1/kL2 and "sil" for the silence class.
  const std::string& class_name(LanguageClass c) const;

  std::optional<std::size_t> find(std::string_view name) const;

  // Indices of all phones of one class, in inventory order.
  const std::vector<std::size_t>& class_members(LanguageClass c) const {
    return by_class_[class_index(c)];
  }

 private:
  std::vector<Phone> phones_;
  std::string l1_name_;
  std::string l2_name_;
  std::string sil_name_;
  std::array<std::vector<std::size_t>, kNumClasses> by_class_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// T x P matrix of per-frame phone posteriors, row major.  Values are
// validated to be finite and non-negative where the matrix is parsed or
// generated; operations treat instances as immutable and return new ones.
class PosteriorMatrix {
 public:
  PosteriorMatrix(std::string utterance_id, double frame_period,
                  std::size_t num_frames, std::size_t num_phones);

  const std::string& utterance_id() const { return utterance_id_; }
  double frame_period() const { return frame_period_; }
  std::size_t num_frames() const { return num_frames_; }
  std::size_t num_phones() const { return num_phones_; }

  std::span<double> row(std::size_t t) {
    return {values_.data() + t * num_phones_, num_phones_};
  }
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * num_phones_, num_phones_};
  }
  double at(std::size_t t, std::size_t p) const {
    return values_[t * num_phones_ + p];
  }
  double& at(std::size_t t, std::size_t p) {
    return values_[t * num_phones_ + p];
  }

 private:
  std::string utterance_id_;
  double frame_period_ = 0.0;
  std::size_t num_frames_ = 0;
  std::size_t num_phones_ = 0;
  std::vector<double> values_;
};

// T x 3 matrix of per-frame class posteriors, columns in kClassOrder order.
struct LanguagePosteriorMatrix {
  std::string utterance_id;
  double frame_period = 0.0;
  std::vector<std::array<double, kNumClasses>> rows;
};

// Language prior with the two language weights tied so they sum to one;
// w_l2 is always derived from w_l1.  The silence weight is independent and
// is held fixed during sweeps.
class PriorWeights {
 public:
  explicit PriorWeights(double w_l1, double w_sil = 1.0);

  double l1() const { return w_l1_; }
  double l2() const { return 1.0 - w_l1_; }
  double sil() const { return w_sil_; }
  double for_class(LanguageClass c) const;

 private:
  double w_l1_;
  double w_sil_;
};

// Per-frame language decisions for one utterance.
struct FrameLabelSequence {
  std::string utterance_id;
  double frame_period = 0.0;
  std::vector<LanguageClass> labels;
};

// One monolingual or silence stretch.  `token` is the bare word carried by
// a CTM line; empty for segments that only carry a class.
struct Segment {
  std::string utterance_id;
  double start = 0.0;
  double duration = 0.0;
  LanguageClass cls = LanguageClass::kSil;
  std::string token;

  double end() const { return start + duration; }
};

// Segments of one utterance, sorted by start time, non-overlapping.
using SegmentSequence = std::vector<Segment>;

// Tolerance for floating-point comparisons on segment boundaries.
inline constexpr double kTimeEps = 1e-9;

// Throws InputError when `segments` violates ordering, duration positivity
// or the non-overlap invariant.  `context` names the data in messages.
void validate_segments(const SegmentSequence& segments,
                       std::string_view context);

}  // namespace csd

#endif  // CSDETECT_TYPES_H_
