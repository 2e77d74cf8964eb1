// src/segmentation.cpp

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

#include "csdetect/segmentation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

#include "csdetect/errors.hpp"

namespace csd {

namespace {

std::string location(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line;
  return os.str();
}

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_no;
  return true;
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

double parse_time(std::string_view token, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      std::isnan(value)) {
    throw InputError(where + ": cannot parse time '" + std::string(token) +
                     "'");
  }
  if (!std::isfinite(value)) {
    throw InputError(where + ": non-finite time '" + std::string(token) +
                     "'");
  }
  return value;
}

// Splits a CTM token into (class, bare word).  A _<language> suffix tags the
// word; a bare language name or "sil" is a wordless class segment; anything
// else has no known tag and falls back to silence.
std::pair<LanguageClass, std::string> classify_token(
    std::string_view token, const std::string& l1_name,
    const std::string& l2_name) {
  const std::string l1_suffix = "_" + l1_name;
  const std::string l2_suffix = "_" + l2_name;
  // Longest suffix first, in case one language name ends with the other.
  const bool l1_first = l1_suffix.size() >= l2_suffix.size();
  const std::string& first = l1_first ? l1_suffix : l2_suffix;
  const std::string& second = l1_first ? l2_suffix : l1_suffix;
  const LanguageClass first_cls =
      l1_first ? LanguageClass::kL1 : LanguageClass::kL2;
  const LanguageClass second_cls =
      l1_first ? LanguageClass::kL2 : LanguageClass::kL1;

  if (token.size() > first.size() && token.ends_with(first)) {
    return {first_cls, std::string(token.substr(0, token.size() - first.size()))};
  }
  if (token.size() > second.size() && token.ends_with(second)) {
    return {second_cls,
            std::string(token.substr(0, token.size() - second.size()))};
  }
  if (token == l1_name) return {LanguageClass::kL1, ""};
  if (token == l2_name) return {LanguageClass::kL2, ""};
  if (token == "sil") return {LanguageClass::kSil, ""};
  return {LanguageClass::kSil, std::string(token)};
}

std::int64_t to_millis(double seconds) {
  return std::llround(seconds * 1000.0);
}

void append_millis(std::string& out, std::int64_t millis) {
  char buf[32];
  int n = std::snprintf(buf, sizeof(buf), "%lld.%03lld",
                        static_cast<long long>(millis / 1000),
                        static_cast<long long>(millis % 1000));
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

SegmentSequence frames_to_segments(const FrameLabelSequence& labels) {
  if (labels.labels.empty()) {
    throw InputError("frames_to_segments: empty label sequence for "
                     "utterance '" + labels.utterance_id + "'");
  }
  if (!(labels.frame_period > 0.0)) {
    throw InputError("frames_to_segments: non-positive frame period for "
                     "utterance '" + labels.utterance_id + "'");
  }
  SegmentSequence out;
  const double dt = labels.frame_period;
  std::size_t run_start = 0;
  for (std::size_t f = 1; f <= labels.labels.size(); ++f) {
    if (f == labels.labels.size() ||
        labels.labels[f] != labels.labels[run_start]) {
      Segment seg;
      seg.utterance_id = labels.utterance_id;
      seg.start = static_cast<double>(run_start) * dt;
      seg.duration = static_cast<double>(f - run_start) * dt;
      seg.cls = labels.labels[run_start];
      out.push_back(std::move(seg));
      run_start = f;
    }
  }
  return out;
}

FrameLabelSequence segments_to_frames(const SegmentSequence& segments,
                                      double frame_period,
                                      std::size_t total_frames,
                                      std::string_view utterance_id) {
  if (!(frame_period > 0.0) || !std::isfinite(frame_period)) {
    throw InputError("segments_to_frames: frame period must be positive");
  }
  if (total_frames == 0) {
    throw InputError("segments_to_frames: total frame count must be >= 1");
  }
  validate_segments(segments, "segments_to_frames");

  std::string utt(utterance_id);
  if (utt.empty() && !segments.empty()) utt = segments[0].utterance_id;

  const double span_limit =
      static_cast<double>(total_frames) * frame_period + 0.5 * frame_period;
  if (!segments.empty() && segments.back().end() > span_limit + kTimeEps) {
    std::ostringstream os;
    os << "segments_to_frames: utterance '" << utt << "' segment ends at "
       << segments.back().end() << " which is beyond the frame span of "
       << static_cast<double>(total_frames) * frame_period
       << " (plus half a frame)";
    throw InputError(os.str());
  }

  FrameLabelSequence out;
  out.utterance_id = std::move(utt);
  out.frame_period = frame_period;
  out.labels.assign(total_frames, LanguageClass::kSil);

  std::size_t seg = 0;
  for (std::size_t f = 0; f < total_frames; ++f) {
    const double midpoint = (static_cast<double>(f) + 0.5) * frame_period;
    while (seg < segments.size() && segments[seg].end() <= midpoint) ++seg;
    if (seg < segments.size() && segments[seg].start <= midpoint) {
      out.labels[f] = segments[seg].cls;
    }
  }
  return out;
}

SegmentSequence coalesce_segments(const SegmentSequence& segments) {
  validate_segments(segments, "coalesce_segments");
  SegmentSequence out;
  for (const Segment& seg : segments) {
    if (!out.empty() && out.back().cls == seg.cls &&
        std::abs(out.back().end() - seg.start) <= kTimeEps) {
      Segment& merged = out.back();
      merged.duration = seg.end() - merged.start;
      if (merged.token != seg.token) merged.token.clear();
    } else {
      out.push_back(seg);
    }
  }
  return out;
}

std::vector<SegmentSequence> parse_ctm(std::istream& in,
                                       const std::string& l1_name,
                                       const std::string& l2_name,
                                       std::string_view source_name) {
  std::map<std::string, SegmentSequence> by_utterance;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    if (line.empty()) continue;
    if (line[0] == '#' || line.starts_with(";;")) continue;
    auto fields = split_ws(line);
    if (fields.size() != 5) {
      throw InputError(location(source_name, line_no) +
                       ": malformed CTM line (expected 5 fields): '" + line +
                       "'");
    }
    const std::string where = location(source_name, line_no);
    Segment seg;
    seg.utterance_id = std::string(fields[0]);
    seg.start = parse_time(fields[2], where);
    seg.duration = parse_time(fields[3], where);
    if (seg.start < 0.0) {
      throw InputError(where + ": negative start time");
    }
    if (!(seg.duration > 0.0)) {
      throw InputError(where + ": non-positive duration");
    }
    auto [cls, word] = classify_token(fields[4], l1_name, l2_name);
    seg.cls = cls;
    seg.token = std::move(word);
    by_utterance[seg.utterance_id].push_back(std::move(seg));
  }

  std::vector<SegmentSequence> out;
  out.reserve(by_utterance.size());
  for (auto& [utt, segs] : by_utterance) {
    std::stable_sort(segs.begin(), segs.end(),
                     [](const Segment& a, const Segment& b) {
                       return a.start < b.start;
                     });
    try {
      validate_segments(segs, "parse_ctm");
    } catch (const InputError& e) {
      throw InputError(std::string(source_name) + ": " + e.what());
    }
    out.push_back(std::move(segs));
  }
  return out;
}

std::string write_ctm(std::span<const SegmentSequence> sequences,
                      const std::string& l1_name, const std::string& l2_name) {
  std::string out;
  for (const SegmentSequence& seq : sequences) {
    validate_segments(seq, "write_ctm");
    for (const Segment& seg : seq) {
      // End-anchored quantization keeps adjacent segments adjacent after
      // rounding to the 1 ms grid.
      const std::int64_t start_ms = to_millis(seg.start);
      const std::int64_t end_ms = to_millis(seg.end());
      if (end_ms <= start_ms) {
        std::ostringstream os;
        os << "write_ctm: segment of utterance '" << seg.utterance_id
           << "' at " << seg.start << " is shorter than the 1 ms CTM "
           << "resolution";
        throw InputError(os.str());
      }
      out += seg.utterance_id;
      out += " 1 ";
      append_millis(out, start_ms);
      out += ' ';
      append_millis(out, end_ms - start_ms);
      out += ' ';
      switch (seg.cls) {
        case LanguageClass::kL1:
          out += seg.token.empty() ? l1_name : seg.token + "_" + l1_name;
          break;
        case LanguageClass::kL2:
          out += seg.token.empty() ? l2_name : seg.token + "_" + l2_name;
          break;
        case LanguageClass::kSil:
          out += seg.token.empty() ? "sil" : seg.token;
          break;
      }
      out += '\n';
    }
  }
  return out;
}

std::string write_ctm(const SegmentSequence& sequence,
                      const std::string& l1_name, const std::string& l2_name) {
  return write_ctm(std::span<const SegmentSequence>(&sequence, 1), l1_name,
                   l2_name);
}

SwitchCount count_switches(const SegmentSequence& segments) {
  SwitchCount out;
  if (!segments.empty()) out.utterance_id = segments[0].utterance_id;
  bool have_prev = false;
  LanguageClass prev = LanguageClass::kSil;
  for (const Segment& seg : segments) {
    if (seg.cls == LanguageClass::kSil) continue;
    if (have_prev && seg.cls != prev) ++out.count;
    prev = seg.cls;
    have_prev = true;
  }
  return out;
}

std::int64_t DurationHistogram::total() const {
  std::int64_t sum = 0;
  for (const auto& per_language : counts) {
    for (std::int64_t c : per_language) sum += c;
  }
  return sum;
}

DurationHistogram duration_histogram(std::span<const SegmentSequence> corpus,
                                     std::vector<double> bin_edges) {
  if (bin_edges.size() < 2) {
    throw InputError("duration_histogram: need at least two bin edges");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) {
      throw InputError("duration_histogram: bin edges must be strictly "
                       "ascending");
    }
  }
  DurationHistogram hist;
  hist.bin_edges = std::move(bin_edges);
  for (auto& per_language : hist.counts) {
    per_language.assign(hist.bin_edges.size(), 0);
  }
  for (const SegmentSequence& seq : corpus) {
    for (const Segment& seg : seq) {
      if (seg.cls == LanguageClass::kSil) continue;
      auto it = std::upper_bound(hist.bin_edges.begin(), hist.bin_edges.end(),
                                 seg.duration);
      std::ptrdiff_t idx = (it - hist.bin_edges.begin()) - 1;
      if (idx < 0) idx = 0;  // below the first edge: first bin
      hist.counts[class_index(seg.cls)][static_cast<std::size_t>(idx)] += 1;
    }
  }
  return hist;
}

std::vector<double> default_histogram_edges() {
  std::vector<double> edges;
  for (int i = 0; i <= 20; ++i) edges.push_back(0.5 * i);
  return edges;
}

}  // namespace csd
