// include/csdetect/segmentation.hpp

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

#ifndef CSDETECT_SEGMENTATION_H_
#define CSDETECT_SEGMENTATION_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csdetect/types.hpp"

namespace csd {

// Maximal runs of equal labels become segments; concatenated durations span
// exactly T * frame_period.
SegmentSequence frames_to_segments(const FrameLabelSequence& labels);

// Inverse of frames_to_segments for frame-aligned segments: each frame takes
// the class of the segment containing its midpoint, uncovered frames are
// silence.
FrameLabelSequence segments_to_frames(const SegmentSequence& segments,
                                      double frame_period,
                                      std::size_t total_frames,
                                      std::string_view utterance_id = {});

// Merges time-adjacent segments of equal class into maximal runs, e.g. two
// consecutive words of the same language parsed from a CTM file.
SegmentSequence coalesce_segments(const SegmentSequence& segments);

// CTM line format (text, UTF-8, LF, space separated):
//   <utterance-id> <channel> <start-seconds> <duration-seconds> <token>
// Channel is always written as 1 and ignored on parse; times are fixed-point
// with 3 decimals.  Language-tagged tokens carry the suffix _<l1name> or
// _<l2name>; a bare class name marks a segment without a word; every other
// token is treated as silence.
std::vector<SegmentSequence> parse_ctm(std::istream& in,
                                       const std::string& l1_name,
                                       const std::string& l2_name,
                                       std::string_view source_name = "<ctm>");

std::string write_ctm(std::span<const SegmentSequence> sequences,
                      const std::string& l1_name, const std::string& l2_name);
std::string write_ctm(const SegmentSequence& sequence,
                      const std::string& l1_name, const std::string& l2_name);

struct SwitchCount {
  std::string utterance_id;
  std::int64_t count = 0;
};

// Number of adjacent non-silence segment pairs with differing language.
// Silence is transparent: an L1 run separated from an L2 run by silence
// counts as one switch.
SwitchCount count_switches(const SegmentSequence& segments);

struct DurationHistogram {
  // Ascending; bin i covers [edges[i], edges[i+1]) and the last bin is the
  // overflow [edges.back(), inf).
  std::vector<double> bin_edges;
  // One count vector per language (silence excluded), bin_edges.size() bins.
  std::array<std::vector<std::int64_t>, 2> counts;

  std::int64_t total() const;
};

// Counts every non-silence segment into its duration bin.
DurationHistogram duration_histogram(std::span<const SegmentSequence> corpus,
                                     std::vector<double> bin_edges);

// 0.0, 0.5, ..., 10.0 seconds.
std::vector<double> default_histogram_edges();

}  // namespace csd

#endif  // CSDETECT_SEGMENTATION_H_
