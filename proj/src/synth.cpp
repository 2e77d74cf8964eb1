// src/synth.cpp

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

#include "csdetect/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "csdetect/errors.hpp"
#include "csdetect/segmentation.hpp"

namespace csd {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix_scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

std::string utterance_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%05zu", index + 1);
  return buf;
}

}  // namespace

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += kGolden);
  return splitmix_scramble(z);
}

double Rng::next_unit() {
  // 53 mantissa bits -> [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Rng::next_index(std::size_t n) {
  // Fixed-point multiply keeps the draw independent of library details.
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double Rng::next_exponential(double mean) {
  return -mean * std::log1p(-next_unit());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix_scramble(seed + kGolden * (stream + 1));
}

void SynthConfig::validate() const {
  require(n_utterances >= 1, "n-utterances must be >= 1");
  require(n_utterances <= 99999, "n-utterances must be <= 99999");
  require(segments_per_utterance >= 1,
          "segments-per-utterance must be >= 1");
  require(std::isfinite(mean_segment_dur) && mean_segment_dur > 0.0,
          "mean-segment-dur must be > 0");
  require(std::isfinite(mean_sil_dur) && mean_sil_dur > 0.0,
          "mean-sil-dur must be > 0");
  require(std::isfinite(sil_prob) && sil_prob >= 0.0 && sil_prob <= 1.0,
          "sil-prob must lie in [0, 1], got " + format_double(sil_prob));
  require(std::isfinite(switch_prob) && switch_prob >= 0.0 &&
              switch_prob <= 1.0,
          "switch-prob must lie in [0, 1], got " + format_double(switch_prob));
  require(std::isfinite(confusability) && confusability >= 0.0 &&
              confusability <= 1.0,
          "confusability must lie in [0, 1], got " +
              format_double(confusability));
  require(std::isfinite(concentration) && concentration > 0.0,
          "concentration must be > 0, got " + format_double(concentration));
  require(std::isfinite(frame_period) && frame_period > 0.0,
          "frame-period must be > 0");
  require(!l1_phones.empty(), "l1-phones must list at least one phone");
  require(!l2_phones.empty(), "l2-phones must list at least one phone");
  require(!sil_phones.empty(), "sil-phones must list at least one phone");

  // Builds the inventory (validating names) and the pairing.
  PhoneInventory inventory = build_inventory();
  (void)pair_indices(inventory);
}

PhoneInventory SynthConfig::build_inventory() const {
  std::vector<Phone> phones;
  for (const std::string& name : l1_phones) {
    phones.push_back(Phone{name, LanguageClass::kL1});
  }
  for (const std::string& name : l2_phones) {
    phones.push_back(Phone{name, LanguageClass::kL2});
  }
  for (const std::string& name : sil_phones) {
    phones.push_back(Phone{name, LanguageClass::kSil});
  }
  return PhoneInventory(std::move(phones), l1_name, l2_name);
}

std::vector<std::pair<std::size_t, std::size_t>> SynthConfig::pair_indices(
    const PhoneInventory& inventory) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::set<std::size_t> used;
  for (const auto& [a, b] : confusable_pairs) {
    auto ia = inventory.find(a);
    auto ib = inventory.find(b);
    require(ia.has_value(), "pairs: unknown phone '" + a + "'");
    require(ib.has_value(), "pairs: unknown phone '" + b + "'");
    LanguageClass ca = inventory.class_of(*ia);
    LanguageClass cb = inventory.class_of(*ib);
    require(ca != LanguageClass::kSil && cb != LanguageClass::kSil,
            "pairs: '" + a + ":" + b + "' must pair language phones");
    require(ca != cb, "pairs: '" + a + ":" + b +
                          "' must pair phones of different languages");
    require(used.insert(*ia).second,
            "pairs: phone '" + a + "' appears in more than one pair");
    require(used.insert(*ib).second,
            "pairs: phone '" + b + "' appears in more than one pair");
    out.emplace_back(*ia, *ib);
  }
  return out;
}

std::string serialize_synth_config(const SynthConfig& config) {
  std::map<std::string, std::string> kv;
  kv["seed"] = std::to_string(config.seed);
  kv["n-utterances"] = std::to_string(config.n_utterances);
  kv["segments-per-utterance"] =
      std::to_string(config.segments_per_utterance);
  kv["mean-segment-dur"] = format_double(config.mean_segment_dur);
  kv["mean-sil-dur"] = format_double(config.mean_sil_dur);
  kv["sil-prob"] = format_double(config.sil_prob);
  kv["switch-prob"] = format_double(config.switch_prob);
  kv["confusability"] = format_double(config.confusability);
  kv["concentration"] = format_double(config.concentration);
  kv["frame-period"] = format_double(config.frame_period);
  kv["l1-name"] = config.l1_name;
  kv["l2-name"] = config.l2_name;
  kv["l1-phones"] = join_list(config.l1_phones);
  kv["l2-phones"] = join_list(config.l2_phones);
  kv["sil-phones"] = join_list(config.sil_phones);
  std::string pairs;
  for (std::size_t i = 0; i < config.confusable_pairs.size(); ++i) {
    if (i > 0) pairs += ',';
    pairs += config.confusable_pairs[i].first;
    pairs += ':';
    pairs += config.confusable_pairs[i].second;
  }
  kv["pairs"] = pairs;

  std::string out;
  for (const auto& [key, value] : kv) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) {
      item.remove_prefix(1);
    }
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) {
      item.remove_suffix(1);
    }
    if (!item.empty()) out.emplace_back(item);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

GroundTruth sample_ground_truth(const SynthConfig& config) {
  config.validate();
  GroundTruth truth;
  truth.utterances.reserve(config.n_utterances);
  const double dt = config.frame_period;

  for (std::size_t u = 0; u < config.n_utterances; ++u) {
    // Stream 2u drives the truth, stream 2u+1 the posterior noise.
    Rng rng(mix_seed(config.seed, 2 * u));
    std::vector<LanguageClass> labels;

    LanguageClass lang = rng.next_unit() < 0.5 ? LanguageClass::kL1
                                               : LanguageClass::kL2;
    for (std::size_t s = 0; s < config.segments_per_utterance; ++s) {
      if (s > 0 && rng.next_unit() < config.switch_prob) {
        lang = (lang == LanguageClass::kL1) ? LanguageClass::kL2
                                            : LanguageClass::kL1;
      }
      const double dur = rng.next_exponential(config.mean_segment_dur);
      const std::int64_t frames =
          std::max<std::int64_t>(1, std::llround(dur / dt));
      labels.insert(labels.end(), static_cast<std::size_t>(frames), lang);

      if (s + 1 < config.segments_per_utterance &&
          rng.next_unit() < config.sil_prob) {
        const double sil_dur = rng.next_exponential(config.mean_sil_dur);
        const std::int64_t sil_frames =
            std::max<std::int64_t>(1, std::llround(sil_dur / dt));
        labels.insert(labels.end(), static_cast<std::size_t>(sil_frames),
                      LanguageClass::kSil);
      }
    }

    UtteranceTruth utt;
    utt.frames =
        FrameLabelSequence{utterance_name(u), dt, std::move(labels)};
    utt.segments = frames_to_segments(utt.frames);
    truth.utterances.push_back(std::move(utt));
  }
  return truth;
}

std::vector<PosteriorMatrix> emit_posteriors(const GroundTruth& truth,
                                             const SynthConfig& config) {
  config.validate();
  const PhoneInventory inventory = config.build_inventory();
  const auto pairs = config.pair_indices(inventory);

  // Bidirectional pair lookup: a frame landing on either side of a pair
  // leaks toward the other side.
  std::vector<std::ptrdiff_t> pair_of(inventory.size(), -1);
  for (const auto& [a, b] : pairs) {
    pair_of[a] = static_cast<std::ptrdiff_t>(b);
    pair_of[b] = static_cast<std::ptrdiff_t>(a);
  }

  const double kept = config.concentration / (1.0 + config.concentration);
  const double residual = 1.0 - kept;

  std::vector<PosteriorMatrix> out;
  out.reserve(truth.utterances.size());

  for (std::size_t u = 0; u < truth.utterances.size(); ++u) {
    const FrameLabelSequence& frames = truth.utterances[u].frames;
    Rng rng(mix_seed(config.seed, 2 * u + 1));
    PosteriorMatrix matrix(frames.utterance_id, frames.frame_period,
                           frames.labels.size(), inventory.size());
    for (std::size_t t = 0; t < frames.labels.size(); ++t) {
      const LanguageClass cls = frames.labels[t];
      const auto& members = inventory.class_members(cls);
      auto row = matrix.row(t);
      const double floor = residual / static_cast<double>(members.size());
      for (std::size_t idx : members) row[idx] = floor;

      const std::size_t chosen = members[rng.next_index(members.size())];
      double leak = 0.0;
      if (cls != LanguageClass::kSil && pair_of[chosen] >= 0 &&
          config.confusability > 0.0) {
        const double fraction = rng.next_unit() * config.confusability;
        leak = kept * fraction;
        row[static_cast<std::size_t>(pair_of[chosen])] += leak;
      }
      row[chosen] += kept - leak;
    }
    out.push_back(std::move(matrix));
  }
  return out;
}

MissRates oracle_miss_rates(const FrameLabelSequence& hyp,
                            const UtteranceTruth& truth) {
  const FrameLabelSequence& ref = truth.frames;
  if (hyp.labels.size() != ref.labels.size()) {
    throw InputError("oracle_miss_rates: hypothesis for utterance '" +
                     hyp.utterance_id + "' has " +
                     std::to_string(hyp.labels.size()) +
                     " frames but the truth has " +
                     std::to_string(ref.labels.size()));
  }
  MissRates out;
  for (std::size_t f = 0; f < ref.labels.size(); ++f) {
    if (ref.labels[f] == LanguageClass::kL1) {
      out.ref_l1_frames += 1;
      if (hyp.labels[f] != LanguageClass::kL1) out.missed_l1_frames += 1;
    }
  }
  for (std::size_t f = 0; f < ref.labels.size(); ++f) {
    if (ref.labels[f] == LanguageClass::kL2) {
      out.ref_l2_frames += 1;
      if (hyp.labels[f] != LanguageClass::kL2) out.missed_l2_frames += 1;
    }
  }
  return out;
}

MissRates oracle_miss_rates(std::span<const FrameLabelSequence> hyp,
                            const GroundTruth& truth) {
  if (hyp.size() != truth.utterances.size()) {
    throw InputError("oracle_miss_rates: hypothesis and truth have different "
                     "utterance counts");
  }
  MissRates out;
  for (std::size_t u = 0; u < hyp.size(); ++u) {
    MissRates r = oracle_miss_rates(hyp[u], truth.utterances[u]);
    out.missed_l1_frames += r.missed_l1_frames;
    out.missed_l2_frames += r.missed_l2_frames;
    out.ref_l1_frames += r.ref_l1_frames;
    out.ref_l2_frames += r.ref_l2_frames;
  }
  return out;
}

}  // namespace csd
