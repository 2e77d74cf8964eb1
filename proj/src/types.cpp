// src/types.cpp

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

#include "csdetect/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "csdetect/errors.hpp"

namespace csd {

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

void check_language_name(const std::string& name, const char* which) {
  if (name.empty()) {
    throw InputError(std::string("inventory: ") + which +
                     " language name is empty");
  }
  if (has_whitespace(name)) {
    throw InputError(std::string("inventory: ") + which + " language name '" +
                     name + "' contains whitespace");
  }
  if (name == "sil") {
    throw InputError(std::string("inventory: ") + which +
                     " language name must not be 'sil'");
  }
}

}  // namespace

PhoneInventory::PhoneInventory(std::vector<Phone> phones, std::string l1_name,
                               std::string l2_name)
    : phones_(std::move(phones)),
      l1_name_(std::move(l1_name)),
      l2_name_(std::move(l2_name)),
      sil_name_("sil") {
  check_language_name(l1_name_, "l1");
  check_language_name(l2_name_, "l2");
  if (l1_name_ == l2_name_) {
    throw InputError("inventory: the two language names are both '" +
                     l1_name_ + "'");
  }
  for (std::size_t i = 0; i < phones_.size(); ++i) {
    const Phone& p = phones_[i];
    if (p.name.empty()) {
      throw InputError("inventory: phone with empty name");
    }
    if (has_whitespace(p.name)) {
      throw InputError("inventory: phone name '" + p.name +
                       "' contains whitespace");
    }
    if (!index_.emplace(p.name, i).second) {
      throw InputError("inventory: duplicate phone name '" + p.name + "'");
    }
    by_class_[class_index(p.cls)].push_back(i);
  }
  for (LanguageClass c : kClassOrder) {
    if (by_class_[class_index(c)].empty()) {
      throw InputError("inventory: no phone of class '" + class_name(c) +
                       "'");
    }
  }
}

const std::string& PhoneInventory::class_name(LanguageClass c) const {
  switch (c) {
    case LanguageClass::kL1:
      return l1_name_;
    case LanguageClass::kL2:
      return l2_name_;
    case LanguageClass::kSil:
      return sil_name_;
  }
  return sil_name_;
}

std::optional<std::size_t> PhoneInventory::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PosteriorMatrix::PosteriorMatrix(std::string utterance_id, double frame_period,
                                 std::size_t num_frames,
                                 std::size_t num_phones)
    : utterance_id_(std::move(utterance_id)),
      frame_period_(frame_period),
      num_frames_(num_frames),
      num_phones_(num_phones),
      values_(num_frames * num_phones, 0.0) {
  if (num_frames_ == 0) {
    throw InputError("posterior matrix for utterance '" + utterance_id_ +
                     "' has zero frames");
  }
  if (num_phones_ == 0) {
    throw InputError("posterior matrix for utterance '" + utterance_id_ +
                     "' has zero phones");
  }
  if (!(frame_period_ > 0.0) || !std::isfinite(frame_period_)) {
    throw InputError("posterior matrix for utterance '" + utterance_id_ +
                     "' has non-positive frame period");
  }
}

PriorWeights::PriorWeights(double w_l1, double w_sil)
    : w_l1_(w_l1), w_sil_(w_sil) {
  if (!std::isfinite(w_l1) || !(w_l1 > 0.0) || !(w_l1 < 1.0)) {
    std::ostringstream os;
    os << "prior weight w_l1 must lie strictly inside (0, 1), got " << w_l1;
    throw InputError(os.str());
  }
  if (!std::isfinite(w_sil) || !(w_sil > 0.0)) {
    std::ostringstream os;
    os << "prior weight w_sil must be positive, got " << w_sil;
    throw InputError(os.str());
  }
}

double PriorWeights::for_class(LanguageClass c) const {
  switch (c) {
    case LanguageClass::kL1:
      return l1();
    case LanguageClass::kL2:
      return l2();
    case LanguageClass::kSil:
      return sil();
  }
  return sil();
}

void validate_segments(const SegmentSequence& segments,
                       std::string_view context) {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    std::ostringstream at;
    at << context << ": segment " << i << " of utterance '" << s.utterance_id
       << "'";
    if (!std::isfinite(s.start) || !std::isfinite(s.duration)) {
      throw InputError(at.str() + " has a non-finite time");
    }
    if (s.start < -kTimeEps) {
      throw InputError(at.str() + " has a negative start time");
    }
    if (!(s.duration > 0.0)) {
      throw InputError(at.str() + " has a non-positive duration");
    }
    if (i > 0) {
      const Segment& prev = segments[i - 1];
      if (s.utterance_id != prev.utterance_id) {
        throw InputError(at.str() + " mixes utterances '" +
                         prev.utterance_id + "' and '" + s.utterance_id +
                         "'");
      }
      if (s.start + kTimeEps < prev.start) {
        throw InputError(at.str() + " is not sorted by start time");
      }
      if (s.start + kTimeEps < prev.end()) {
        std::ostringstream os;
        os << at.str() << " overlaps the previous segment ending at "
           << prev.end();
        throw InputError(os.str());
      }
    }
  }
}

}  // namespace csd
