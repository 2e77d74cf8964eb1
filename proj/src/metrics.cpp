// src/metrics.cpp

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

#include "csdetect/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "csdetect/errors.hpp"
#include "csdetect/posterior.hpp"

namespace csd {

std::optional<double> MissRates::missed_l1() const {
  if (ref_l1_frames == 0) return std::nullopt;
  return static_cast<double>(missed_l1_frames) /
         static_cast<double>(ref_l1_frames);
}

std::optional<double> MissRates::missed_l2() const {
  if (ref_l2_frames == 0) return std::nullopt;
  return static_cast<double>(missed_l2_frames) /
         static_cast<double>(ref_l2_frames);
}

MissRates& MissRates::operator+=(const MissRates& other) {
  missed_l1_frames += other.missed_l1_frames;
  missed_l2_frames += other.missed_l2_frames;
  ref_l1_frames += other.ref_l1_frames;
  ref_l2_frames += other.ref_l2_frames;
  return *this;
}

MissRates missed_time(const FrameLabelSequence& hyp,
                      const FrameLabelSequence& ref) {
  if (hyp.labels.size() != ref.labels.size()) {
    std::ostringstream os;
    os << "missed_time: hypothesis for utterance '" << hyp.utterance_id
       << "' has " << hyp.labels.size() << " frames but the reference has "
       << ref.labels.size();
    throw InputError(os.str());
  }
  const double scale = std::max(hyp.frame_period, ref.frame_period);
  if (std::abs(hyp.frame_period - ref.frame_period) > 1e-9 * scale) {
    std::ostringstream os;
    os << "missed_time: frame period mismatch for utterance '"
       << hyp.utterance_id << "': " << hyp.frame_period << " vs "
       << ref.frame_period;
    throw InputError(os.str());
  }
  MissRates out;
  for (std::size_t f = 0; f < ref.labels.size(); ++f) {
    switch (ref.labels[f]) {
      case LanguageClass::kL1:
        ++out.ref_l1_frames;
        if (hyp.labels[f] != LanguageClass::kL1) ++out.missed_l1_frames;
        break;
      case LanguageClass::kL2:
        ++out.ref_l2_frames;
        if (hyp.labels[f] != LanguageClass::kL2) ++out.missed_l2_frames;
        break;
      case LanguageClass::kSil:
        break;  // silence reference frames are excluded
    }
  }
  return out;
}

MissRates missed_time_corpus(std::span<const FrameLabelSequence> hyp,
                             std::span<const FrameLabelSequence> ref) {
  if (hyp.size() != ref.size()) {
    throw InputError("missed_time_corpus: hypothesis and reference corpora "
                     "have different utterance counts");
  }
  MissRates pooled;
  for (std::size_t u = 0; u < hyp.size(); ++u) {
    pooled += missed_time(hyp[u], ref[u]);
  }
  return pooled;
}

bool DetCurve::miss_rates_monotone() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].missed_l1 > points[i - 1].missed_l1) return false;
    if (points[i].missed_l2 < points[i - 1].missed_l2) return false;
  }
  return true;
}

std::vector<PriorWeights> logit_weight_grid(std::size_t n, double w_sil) {
  if (n == 0) {
    throw InputError("weight grid must not be empty");
  }
  std::vector<PriorWeights> grid;
  grid.reserve(n);
  if (n == 1) {
    grid.emplace_back(0.5, w_sil);
    return grid;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x =
        -6.0 + 12.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    grid.emplace_back(1.0 / (1.0 + std::exp(-x)), w_sil);
  }
  return grid;
}

DetPoint evaluate_operating_point(const PriorWeights& weights,
                                  std::span<const FrameLabelSequence> hyp,
                                  std::span<const FrameLabelSequence> ref,
                                  Aggregation agg) {
  MissRates pooled = missed_time_corpus(hyp, ref);
  double rate_l1 = 0.0;
  double rate_l2 = 0.0;
  if (agg == Aggregation::kPooled) {
    auto l1 = pooled.missed_l1();
    auto l2 = pooled.missed_l2();
    if (!l1 || !l2) {
      throw MetricDomainError(
          std::string("miss rate undefined: the reference contains no ") +
          (!l1 ? "L1" : "L2") + " frames");
    }
    rate_l1 = *l1;
    rate_l2 = *l2;
  } else {
    double sum_l1 = 0.0, sum_l2 = 0.0;
    std::size_t n_l1 = 0, n_l2 = 0;
    for (std::size_t u = 0; u < hyp.size(); ++u) {
      MissRates r = missed_time(hyp[u], ref[u]);
      if (auto v = r.missed_l1()) {
        sum_l1 += *v;
        ++n_l1;
      }
      if (auto v = r.missed_l2()) {
        sum_l2 += *v;
        ++n_l2;
      }
    }
    if (n_l1 == 0 || n_l2 == 0) {
      throw MetricDomainError(
          std::string("miss rate undefined: no utterance has reference ") +
          (n_l1 == 0 ? "L1" : "L2") + " frames");
    }
    rate_l1 = sum_l1 / static_cast<double>(n_l1);
    rate_l2 = sum_l2 / static_cast<double>(n_l2);
  }
  return DetPoint{weights, pooled, rate_l1, rate_l2};
}

DetCurve det_sweep(std::span<const PosteriorMatrix> normalized,
                   const PhoneInventory& inventory,
                   std::span<const FrameLabelSequence> refs, DecisionRule rule,
                   std::span<const PriorWeights> grid, Aggregation agg) {
  if (rule == DecisionRule::kBaselineAlignment) {
    throw InputError(
        "det_sweep: the baseline rule is evaluated from externally supplied "
        "per-weight alignments, not from posteriors");
  }
  if (grid.empty()) {
    throw InputError("det_sweep: empty weight grid");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i].l1() > grid[i - 1].l1())) {
      throw InputError("det_sweep: weight grid must be strictly ascending "
                       "in w_l1");
    }
  }
  if (normalized.size() != refs.size()) {
    throw InputError("det_sweep: matrix and reference counts differ");
  }

  DetCurve curve;
  curve.rule = rule;
  curve.points.reserve(grid.size());

  std::vector<FrameLabelSequence> hyp(normalized.size());
  for (const PriorWeights& w : grid) {
    try {
      for (std::size_t u = 0; u < normalized.size(); ++u) {
        PosteriorMatrix reweighted =
            apply_language_prior(normalized[u], inventory, w);
        hyp[u] = decide(reweighted, inventory, rule);
      }
      curve.points.push_back(evaluate_operating_point(w, hyp, refs, agg));
    } catch (const InputError& e) {
      std::ostringstream os;
      os << "det_sweep at w_l1=" << w.l1() << ": " << e.what();
      throw InputError(os.str());
    } catch (const MetricDomainError& e) {
      std::ostringstream os;
      os << "det_sweep at w_l1=" << w.l1() << ": " << e.what();
      throw MetricDomainError(os.str());
    }
  }

  // The max-language rule is provably monotone in the swept weight; a
  // violation here is an implementation bug, not bad input.
  if (rule == DecisionRule::kMaxLanguage && !curve.miss_rates_monotone()) {
    throw std::logic_error(
        "det_sweep: max-language DET curve is not monotone");
  }
  return curve;
}

EerResult eer(const DetCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 2) {
    throw MetricDomainError(
        "eer: need at least two DET points to extract an equal error rate");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double diff = pts[i].missed_l1 - pts[i].missed_l2;
    if (diff == 0.0) {
      return EerResult{pts[i].missed_l1, pts[i].weights, false};
    }
    if (i + 1 < pts.size()) {
      const double next_diff = pts[i + 1].missed_l1 - pts[i + 1].missed_l2;
      if ((diff > 0.0 && next_diff < 0.0) || (diff < 0.0 && next_diff > 0.0)) {
        const double t = diff / (diff - next_diff);
        const double w_l1 =
            pts[i].weights.l1() +
            t * (pts[i + 1].weights.l1() - pts[i].weights.l1());
        const double value =
            pts[i].missed_l1 + t * (pts[i + 1].missed_l1 - pts[i].missed_l1);
        return EerResult{value, PriorWeights(w_l1, pts[i].weights.sil()),
                         true};
      }
    }
  }
  throw MetricDomainError(
      "eer: the miss rates never cross inside the weight grid (grid too "
      "narrow?)");
}

std::string det_curve_csv(const DetCurve& curve) {
  std::string out = "w_l1,missed_l1,missed_l2\n";
  char buf[96];
  for (const DetPoint& p : curve.points) {
    int n = std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n",
                          p.weights.l1(), p.missed_l1, p.missed_l2);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace csd
