// include/csdetect/synth.hpp

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

#ifndef CSDETECT_SYNTH_H_
#define CSDETECT_SYNTH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csdetect/metrics.hpp"
#include "csdetect/types.hpp"

namespace csd {

// Deterministic splitmix64 stream.  Distributions are implemented here
// rather than taken from <random> so that generated corpora are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_unit();                     // [0, 1)
  std::size_t next_index(std::size_t n);  // uniform in [0, n)
  double next_exponential(double mean);

 private:
  std::uint64_t state_;
};

// Fixed mixing function deriving per-utterance stream seeds from the corpus
// seed, so utterances are independent of generation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Parameters of the synthetic bilingual corpus generator.  The inventory is
// described by name lists so the config can live in a flat key=value file;
// confusable_pairs couples one phone of each language.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_utterances = 10;
  std::size_t segments_per_utterance = 10;
  double mean_segment_dur = 1.0;  // seconds, language segments
  double mean_sil_dur = 0.3;      // seconds, inserted silences
  double sil_prob = 0.2;          // probability of silence between segments
  double switch_prob = 0.3;       // per-segment language alternation
  double confusability = 0.0;     // max leak fraction on paired phones
  double concentration = 10.0;    // sharpness; kept mass = c / (1 + c)
  double frame_period = 0.01;
  std::string l1_name = "fry";
  std::string l2_name = "nld";
  std::vector<std::string> l1_phones = {"f1", "f2", "f3", "f4"};
  std::vector<std::string> l2_phones = {"n1", "n2", "n3", "n4"};
  std::vector<std::string> sil_phones = {"sil"};
  std::vector<std::pair<std::string, std::string>> confusable_pairs = {
      {"f1", "n1"}};

  // Throws InputError naming the offending key.
  void validate() const;
  PhoneInventory build_inventory() const;
  std::vector<std::pair<std::size_t, std::size_t>> pair_indices(
      const PhoneInventory& inventory) const;
};

// Manifest serialization: flat key=value lines, keys matching the CLI
// option names, doubles in shortest round-trip form.
std::string serialize_synth_config(const SynthConfig& config);

std::vector<std::string> split_list(std::string_view text, char sep);

struct UtteranceTruth {
  SegmentSequence segments;
  FrameLabelSequence frames;
};

struct GroundTruth {
  std::vector<UtteranceTruth> utterances;
};

// Reference segments and frame labels per utterance: a uniformly drawn
// first language, then alternating-or-repeating segments via switch_prob
// with exponential durations truncated to at least one frame, and optional
// silence insertions.  Pure function of the config.
GroundTruth sample_ground_truth(const SynthConfig& config);

// Noisy posteriors for the ground truth.  Each frame concentrates mass
// c/(1+c) on a uniformly drawn phone of the true class; when that phone has
// a declared cross-language pair, a uniform fraction of [0, confusability)
// of the concentrated mass leaks to the paired phone.  The remaining mass
// spreads evenly over the phones of the true class, so the language sum can
// stay correct while the per-phone maximum flips.  Rows are normalized by
// construction.
std::vector<PosteriorMatrix> emit_posteriors(const GroundTruth& truth,
                                             const SynthConfig& config);

// Brute-force frame recount, independent of the metrics implementation.
// Test oracle only.
MissRates oracle_miss_rates(std::span<const FrameLabelSequence> hyp,
                            const GroundTruth& truth);
MissRates oracle_miss_rates(const FrameLabelSequence& hyp,
                            const UtteranceTruth& truth);

}  // namespace csd

#endif  // CSDETECT_SYNTH_H_
