// tools/csdetect.cpp

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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "csdetect/decision.hpp"
#include "csdetect/errors.hpp"
#include "csdetect/metrics.hpp"
#include "csdetect/posterior.hpp"
#include "csdetect/segmentation.hpp"
#include "csdetect/synth.hpp"
#include "csdetect/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Small file helpers
// ---------------------------------------------------------------------------

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw csd::InputError("cannot write file: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    throw csd::InputError("cannot move " + tmp.string() + " to " +
                          path.string() + ": " + ec.message());
  }
}

std::vector<fs::path> collect_files(const fs::path& root,
                                    std::string_view extension) {
  if (!fs::exists(root)) {
    throw csd::InputError("path does not exist: " + root.string());
  }
  std::vector<fs::path> files;
  if (fs::is_regular_file(root)) {
    files.push_back(root);
  } else if (fs::is_directory(root)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() &&
          entry.path().extension() == extension) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    throw csd::InputError("not a file or directory: " + root.string());
  }
  if (files.empty()) {
    throw csd::InputError("no *" + std::string(extension) +
                          " files found in " + root.string());
  }
  return files;
}

csd::PhoneInventory load_inventory_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw csd::InputError("cannot open inventory file: " + path.string());
  }
  return csd::parse_inventory(in, path.string());
}

// Loads every .fpm under `input`, sorted by utterance id.  A positive
// `frame_period_override` replaces the header value.
std::vector<csd::PosteriorMatrix> load_fpm_inputs(
    const fs::path& input, const csd::PhoneInventory& inventory,
    double frame_period_override) {
  std::vector<csd::PosteriorMatrix> matrices;
  for (const fs::path& file : collect_files(input, ".fpm")) {
    std::ifstream in(file);
    if (!in) {
      throw csd::InputError("cannot open posterior file: " + file.string());
    }
    csd::PosteriorMatrix m = csd::load_posteriors(in, inventory,
                                                  file.string());
    if (frame_period_override > 0.0) {
      csd::PosteriorMatrix adjusted(m.utterance_id(), frame_period_override,
                                    m.num_frames(), m.num_phones());
      for (std::size_t t = 0; t < m.num_frames(); ++t) {
        auto src = m.row(t);
        auto dst = adjusted.row(t);
        std::copy(src.begin(), src.end(), dst.begin());
      }
      m = std::move(adjusted);
    }
    matrices.push_back(std::move(m));
  }
  std::sort(matrices.begin(), matrices.end(),
            [](const csd::PosteriorMatrix& a, const csd::PosteriorMatrix& b) {
              return a.utterance_id() < b.utterance_id();
            });
  for (std::size_t i = 1; i < matrices.size(); ++i) {
    if (matrices[i].utterance_id() == matrices[i - 1].utterance_id()) {
      throw csd::InputError("duplicate utterance id '" +
                            matrices[i].utterance_id() + "' in " +
                            input.string());
    }
  }
  return matrices;
}

std::map<std::string, csd::SegmentSequence> load_ctm_map(
    const fs::path& input, const std::string& l1_name,
    const std::string& l2_name) {
  std::map<std::string, csd::SegmentSequence> by_utterance;
  for (const fs::path& file : collect_files(input, ".ctm")) {
    std::ifstream in(file);
    if (!in) {
      throw csd::InputError("cannot open CTM file: " + file.string());
    }
    for (auto& seq : csd::parse_ctm(in, l1_name, l2_name, file.string())) {
      const std::string& utt = seq.front().utterance_id;
      if (!by_utterance.emplace(utt, std::move(seq)).second) {
        throw csd::InputError("utterance '" + utt +
                              "' appears in more than one CTM file under " +
                              input.string());
      }
    }
  }
  return by_utterance;
}

std::string format_labels_dump(const csd::FrameLabelSequence& labels,
                               const csd::PhoneInventory& inventory) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), labels.frame_period);
  std::string out = "#labels v1 utt=" + labels.utterance_id +
                    " frames=" + std::to_string(labels.labels.size()) +
                    " frame_period=" + std::string(buf, end) + "\n";
  for (csd::LanguageClass c : labels.labels) {
    out += inventory.class_name(c);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_edges(const std::string& spec) {
  if (spec.empty()) return csd::default_histogram_edges();
  std::vector<double> edges;
  for (const std::string& item : csd::split_list(spec, ',')) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(),
                                     v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw csd::InputError("--edges: cannot parse '" + item + "'");
    }
    edges.push_back(v);
  }
  return edges;
}

csd::DecisionRule parse_rule_or_die(const std::string& name) {
  auto rule = csd::parse_rule(name);
  if (!rule) {
    throw csd::InputError("unknown rule '" + name +
                          "' (expected baseline, max-phone or max-language)");
  }
  return *rule;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectOptions {
  std::string inventory;
  std::string input;
  std::string out;
  std::string rule = "max-language";
  double w_l1 = 0.5;
  double w_sil = 1.0;
  double frame_period = 0.0;  // 0 = take from the FPM header
};

void run_detect(const DetectOptions& opt) {
  const csd::DecisionRule rule = parse_rule_or_die(opt.rule);
  if (rule == csd::DecisionRule::kBaselineAlignment) {
    throw csd::InputError(
        "detect decides from posteriors; --rule must be max-phone or "
        "max-language");
  }
  const csd::PhoneInventory inventory = load_inventory_file(opt.inventory);
  const csd::PriorWeights weights(opt.w_l1, opt.w_sil);
  auto matrices = load_fpm_inputs(opt.input, inventory, opt.frame_period);

  fs::create_directories(opt.out);
  std::vector<fs::path> written;
  try {
    for (const csd::PosteriorMatrix& matrix : matrices) {
      csd::PosteriorMatrix reweighted = csd::apply_language_prior(
          csd::l1_normalize(matrix), inventory, weights);
      csd::FrameLabelSequence labels = csd::decide(reweighted, inventory,
                                                   rule);
      csd::SegmentSequence segments = csd::frames_to_segments(labels);

      fs::path ctm_path = fs::path(opt.out) / (matrix.utterance_id() +
                                               ".ctm");
      write_file_atomic(ctm_path, csd::write_ctm(segments,
                                                 inventory.l1_name(),
                                                 inventory.l2_name()));
      written.push_back(ctm_path);

      fs::path labels_path = fs::path(opt.out) / (matrix.utterance_id() +
                                                  ".labels");
      write_file_atomic(labels_path, format_labels_dump(labels, inventory));
      written.push_back(labels_path);
    }
  } catch (...) {
    // No partial output trees.
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
  std::cout << "detect: wrote " << matrices.size() << " hypothesis CTMs to "
            << opt.out << "\n";
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
  std::string inventory;
  std::string input;
  std::string ref;
  std::string out;
  std::string rule = "max-language";
  std::string grid = "101";
  std::string aggregate = "pooled";
  double w_sil = 1.0;
  double frame_period = 0.0;  // 0 = FPM header, or 0.01 for baseline
};

std::vector<csd::PriorWeights> parse_grid(const std::string& spec,
                                          double w_sil) {
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), n);
  if (ec == std::errc() && ptr == spec.data() + spec.size()) {
    return csd::logit_weight_grid(n, w_sil);
  }
  std::ifstream in(spec);
  if (!in) {
    throw csd::InputError("--grid: '" + spec +
                          "' is neither a point count nor a readable file");
  }
  std::vector<csd::PriorWeights> grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    double w = 0.0;
    auto [p2, e2] = std::from_chars(line.data(), line.data() + line.size(),
                                    w);
    if (e2 != std::errc() || p2 != line.data() + line.size()) {
      throw csd::InputError(spec + ":" + std::to_string(line_no) +
                            ": cannot parse weight '" + line + "'");
    }
    grid.emplace_back(w, w_sil);
  }
  if (grid.empty()) {
    throw csd::InputError("--grid: file " + spec + " lists no weights");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i].l1() > grid[i - 1].l1())) {
      throw csd::InputError("--grid: weights in " + spec +
                            " must be strictly ascending");
    }
  }
  return grid;
}

csd::Aggregation parse_aggregation(const std::string& name) {
  if (name == "pooled") return csd::Aggregation::kPooled;
  if (name == "averaged") return csd::Aggregation::kAveraged;
  throw csd::InputError("--aggregate must be 'pooled' or 'averaged', got '" +
                        name + "'");
}

// Baseline path: one subdirectory of hypothesis CTMs per weight, named by
// its w_l1 value.
csd::DetCurve sweep_baseline(const SweepOptions& opt,
                             const csd::PhoneInventory& inventory,
                             const std::map<std::string, csd::SegmentSequence>&
                                 ref_map) {
  const double dt = opt.frame_period > 0.0 ? opt.frame_period : 0.01;
  const csd::Aggregation agg = parse_aggregation(opt.aggregate);

  if (!fs::is_directory(opt.input)) {
    throw csd::InputError("--input for the baseline rule must be a directory "
                          "of per-weight CTM subdirectories: " + opt.input);
  }
  std::vector<std::pair<double, fs::path>> weight_dirs;
  for (const auto& entry : fs::directory_iterator(opt.input)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(),
                                     w);
    if (ec != std::errc() || ptr != name.data() + name.size()) {
      throw csd::InputError("baseline sweep: cannot parse a w_l1 value from "
                            "directory name '" + name + "'");
    }
    weight_dirs.emplace_back(w, entry.path());
  }
  if (weight_dirs.empty()) {
    throw csd::InputError("baseline sweep: no per-weight subdirectories in " +
                          opt.input);
  }
  std::sort(weight_dirs.begin(), weight_dirs.end());
  for (std::size_t i = 1; i < weight_dirs.size(); ++i) {
    if (!(weight_dirs[i].first > weight_dirs[i - 1].first)) {
      throw csd::InputError("baseline sweep: duplicate weight directory " +
                            weight_dirs[i].second.string());
    }
  }

  // Reference labels; the frame span comes from the reference alignment.
  std::vector<std::string> utt_ids;
  std::vector<std::size_t> total_frames;
  std::vector<csd::FrameLabelSequence> refs;
  for (const auto& [utt, segments] : ref_map) {
    const std::size_t frames = static_cast<std::size_t>(
        std::llround(segments.back().end() / dt));
    if (frames == 0) {
      throw csd::InputError("reference for utterance '" + utt +
                            "' spans less than one frame");
    }
    utt_ids.push_back(utt);
    total_frames.push_back(frames);
    refs.push_back(csd::labels_from_alignment(segments, dt, frames, utt));
  }

  csd::DetCurve curve;
  curve.rule = csd::DecisionRule::kBaselineAlignment;
  for (const auto& [w, dir] : weight_dirs) {
    auto hyp_map = load_ctm_map(dir, inventory.l1_name(),
                                inventory.l2_name());
    std::vector<csd::FrameLabelSequence> hyp;
    for (std::size_t i = 0; i < utt_ids.size(); ++i) {
      auto it = hyp_map.find(utt_ids[i]);
      if (it == hyp_map.end()) {
        std::ostringstream os;
        os << "baseline sweep: no hypothesis for utterance '" << utt_ids[i]
           << "' at w_l1=" << w << " (" << dir.string() << ")";
        throw csd::InputError(os.str());
      }
      hyp.push_back(csd::labels_from_alignment(it->second, dt,
                                               total_frames[i], utt_ids[i]));
    }
    curve.points.push_back(csd::evaluate_operating_point(
        csd::PriorWeights(w, opt.w_sil), hyp, refs, agg));
  }
  return curve;
}

csd::DetCurve sweep_posteriors(const SweepOptions& opt,
                               const csd::PhoneInventory& inventory,
                               csd::DecisionRule rule,
                               const std::map<std::string,
                                              csd::SegmentSequence>& ref_map) {
  auto matrices = load_fpm_inputs(opt.input, inventory, opt.frame_period);
  std::vector<csd::PosteriorMatrix> normalized;
  normalized.reserve(matrices.size());
  for (const auto& m : matrices) normalized.push_back(csd::l1_normalize(m));

  std::vector<csd::FrameLabelSequence> refs;
  for (const auto& m : normalized) {
    auto it = ref_map.find(m.utterance_id());
    if (it == ref_map.end()) {
      throw csd::InputError("no reference alignment for utterance '" +
                            m.utterance_id() + "'");
    }
    refs.push_back(csd::labels_from_alignment(it->second, m.frame_period(),
                                              m.num_frames(),
                                              m.utterance_id()));
  }
  auto grid = parse_grid(opt.grid, opt.w_sil);
  return csd::det_sweep(normalized, inventory, refs, rule, grid,
                        parse_aggregation(opt.aggregate));
}

void run_sweep(const SweepOptions& opt) {
  const csd::DecisionRule rule = parse_rule_or_die(opt.rule);
  const csd::PhoneInventory inventory = load_inventory_file(opt.inventory);
  auto ref_map = load_ctm_map(opt.ref, inventory.l1_name(),
                              inventory.l2_name());

  csd::DetCurve curve = (rule == csd::DecisionRule::kBaselineAlignment)
                            ? sweep_baseline(opt, inventory, ref_map)
                            : sweep_posteriors(opt, inventory, rule, ref_map);

  fs::create_directories(opt.out);
  fs::path csv_path = fs::path(opt.out) /
                      ("det_" + std::string(csd::rule_name(rule)) + ".csv");
  write_file_atomic(csv_path, csd::det_curve_csv(curve));
  std::cout << "sweep: wrote " << curve.points.size() << " DET points to "
            << csv_path.string() << "\n";

  // May throw MetricDomainError (exit 3); the curve file is already on disk.
  csd::EerResult result = csd::eer(curve);

  json eer_json;
  eer_json["eer"] = result.eer;
  eer_json["interpolated"] = result.interpolated;
  eer_json["rule"] = std::string(csd::rule_name(rule));
  eer_json["w_at_eer"] = result.w_at_eer.l1();
  write_file_atomic(fs::path(opt.out) / "eer.json", eer_json.dump(2) + "\n");

  std::cout << "sweep: eer=" << result.eer << " at w_l1="
            << result.w_at_eer.l1()
            << (result.interpolated ? " (interpolated)" : "") << "\n";
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeOptions {
  std::string inventory;
  std::string input;
  std::string ref;
  std::string out;
  std::string edges;
};

struct SideStats {
  std::int64_t segments = 0;  // non-silence segments
  std::int64_t switches = 0;
  csd::DurationHistogram histogram;
};

struct Report {
  std::vector<double> edges;
  std::string l1_name;
  std::string l2_name;
  SideStats hypothesis;
  SideStats reference;
};

SideStats side_stats(const std::map<std::string, csd::SegmentSequence>& map,
                     const std::vector<double>& edges) {
  SideStats stats;
  std::vector<csd::SegmentSequence> coalesced;
  coalesced.reserve(map.size());
  for (const auto& [utt, segments] : map) {
    coalesced.push_back(csd::coalesce_segments(segments));
  }
  for (const auto& seq : coalesced) {
    stats.switches += csd::count_switches(seq).count;
    for (const auto& seg : seq) {
      if (seg.cls != csd::LanguageClass::kSil) ++stats.segments;
    }
  }
  stats.histogram = csd::duration_histogram(coalesced, edges);
  return stats;
}

json side_json(const SideStats& stats, const Report& report) {
  json hist;
  hist[report.l1_name] =
      stats.histogram.counts[csd::class_index(csd::LanguageClass::kL1)];
  hist[report.l2_name] =
      stats.histogram.counts[csd::class_index(csd::LanguageClass::kL2)];
  json side;
  side["histogram"] = hist;
  side["segments"] = stats.segments;
  side["switches"] = stats.switches;
  return side;
}

std::string report_text(const Report& report) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %10s %10s\n", "system", "segments",
                "switches");
  os << buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10lld %10lld\n", "reference",
                static_cast<long long>(report.reference.segments),
                static_cast<long long>(report.reference.switches));
  os << buf;
  std::snprintf(buf, sizeof(buf), "%-12s %10lld %10lld\n", "hypothesis",
                static_cast<long long>(report.hypothesis.segments),
                static_cast<long long>(report.hypothesis.switches));
  os << buf;

  os << "\nsegment duration histogram (counts)\n";
  std::string ref_l1 = "ref:" + report.l1_name;
  std::string ref_l2 = "ref:" + report.l2_name;
  std::string hyp_l1 = "hyp:" + report.l1_name;
  std::string hyp_l2 = "hyp:" + report.l2_name;
  std::snprintf(buf, sizeof(buf), "%-18s %9s %9s %9s %9s\n", "bin",
                ref_l1.c_str(), ref_l2.c_str(), hyp_l1.c_str(),
                hyp_l2.c_str());
  os << buf;
  const auto& edges = report.edges;
  for (std::size_t b = 0; b < edges.size(); ++b) {
    std::string bin;
    char range[64];
    if (b + 1 < edges.size()) {
      std::snprintf(range, sizeof(range), "[%.3f, %.3f)", edges[b],
                    edges[b + 1]);
    } else {
      std::snprintf(range, sizeof(range), "[%.3f, inf)", edges[b]);
    }
    const auto l1 = csd::class_index(csd::LanguageClass::kL1);
    const auto l2 = csd::class_index(csd::LanguageClass::kL2);
    std::snprintf(buf, sizeof(buf), "%-18s %9lld %9lld %9lld %9lld\n", range,
                  static_cast<long long>(report.reference.histogram.counts[l1][b]),
                  static_cast<long long>(report.reference.histogram.counts[l2][b]),
                  static_cast<long long>(report.hypothesis.histogram.counts[l1][b]),
                  static_cast<long long>(report.hypothesis.histogram.counts[l2][b]));
    os << buf;
  }
  return os.str();
}

void run_analyze(const AnalyzeOptions& opt) {
  const csd::PhoneInventory inventory = load_inventory_file(opt.inventory);
  auto hyp_map = load_ctm_map(opt.input, inventory.l1_name(),
                              inventory.l2_name());
  auto ref_map = load_ctm_map(opt.ref, inventory.l1_name(),
                              inventory.l2_name());
  if (hyp_map.size() != ref_map.size() ||
      !std::equal(hyp_map.begin(), hyp_map.end(), ref_map.begin(),
                  [](const auto& a, const auto& b) {
                    return a.first == b.first;
                  })) {
    throw csd::InputError(
        "hypothesis and reference cover different utterance sets");
  }

  Report report;
  report.edges = parse_edges(opt.edges);
  report.l1_name = inventory.l1_name();
  report.l2_name = inventory.l2_name();
  report.hypothesis = side_stats(hyp_map, report.edges);
  report.reference = side_stats(ref_map, report.edges);

  json doc;
  doc["edges"] = report.edges;
  doc["hypothesis"] = side_json(report.hypothesis, report);
  doc["reference"] = side_json(report.reference, report);

  const std::string text = report_text(report);
  fs::create_directories(opt.out);
  write_file_atomic(fs::path(opt.out) / "report.json", doc.dump(2) + "\n");
  write_file_atomic(fs::path(opt.out) / "report.txt", text);
  std::cout << text;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string out;
  bool force = false;
  std::uint64_t seed = 1;
  std::uint64_t n_utterances = 10;
  std::uint64_t segments_per_utterance = 10;
  double mean_segment_dur = 1.0;
  double mean_sil_dur = 0.3;
  double sil_prob = 0.2;
  double switch_prob = 0.3;
  double confusability = 0.0;
  double concentration = 10.0;
  double frame_period = 0.01;
  std::string l1_name = "fry";
  std::string l2_name = "nld";
  std::string l1_phones = "f1,f2,f3,f4";
  std::string l2_phones = "n1,n2,n3,n4";
  std::string sil_phones = "sil";
  std::string pairs = "f1:n1";
};

csd::SynthConfig to_synth_config(const SynthOptions& opt) {
  csd::SynthConfig cfg;
  cfg.seed = opt.seed;
  cfg.n_utterances = opt.n_utterances;
  cfg.segments_per_utterance = opt.segments_per_utterance;
  cfg.mean_segment_dur = opt.mean_segment_dur;
  cfg.mean_sil_dur = opt.mean_sil_dur;
  cfg.sil_prob = opt.sil_prob;
  cfg.switch_prob = opt.switch_prob;
  cfg.confusability = opt.confusability;
  cfg.concentration = opt.concentration;
  cfg.frame_period = opt.frame_period;
  cfg.l1_name = opt.l1_name;
  cfg.l2_name = opt.l2_name;
  cfg.l1_phones = csd::split_list(opt.l1_phones, ',');
  cfg.l2_phones = csd::split_list(opt.l2_phones, ',');
  cfg.sil_phones = csd::split_list(opt.sil_phones, ',');
  cfg.confusable_pairs.clear();
  for (const std::string& item : csd::split_list(opt.pairs, ',')) {
    auto parts = csd::split_list(item, ':');
    if (parts.size() != 2) {
      throw csd::InputError("pairs: expected '<l1phone>:<l2phone>', got '" +
                            item + "'");
    }
    cfg.confusable_pairs.emplace_back(parts[0], parts[1]);
  }
  return cfg;
}

void run_synth(const SynthOptions& opt) {
  csd::SynthConfig cfg = to_synth_config(opt);
  cfg.validate();

  const fs::path out(opt.out);
  if (fs::exists(out)) {
    if (!fs::is_directory(out)) {
      throw csd::InputError("--out exists and is not a directory: " +
                            opt.out);
    }
    if (!fs::is_empty(out) && !opt.force) {
      throw csd::InputError("output directory " + opt.out +
                            " is not empty (pass --force to overwrite)");
    }
  }
  fs::create_directories(out / "fpm");
  fs::create_directories(out / "ref");

  const csd::PhoneInventory inventory = cfg.build_inventory();
  csd::GroundTruth truth = csd::sample_ground_truth(cfg);
  std::vector<csd::PosteriorMatrix> matrices = csd::emit_posteriors(truth,
                                                                    cfg);

  write_file_atomic(out / "inventory.txt", csd::write_inventory(inventory));
  write_file_atomic(out / "manifest.txt", csd::serialize_synth_config(cfg));
  for (std::size_t u = 0; u < truth.utterances.size(); ++u) {
    const std::string& utt = matrices[u].utterance_id();
    write_file_atomic(out / "fpm" / (utt + ".fpm"),
                      csd::write_posteriors(matrices[u], inventory));
    write_file_atomic(out / "ref" / (utt + ".ctm"),
                      csd::write_ctm(truth.utterances[u].segments,
                                     cfg.l1_name, cfg.l2_name));
  }
  std::cout << "synth: wrote " << truth.utterances.size()
            << " utterances to " << opt.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code-switching detection from frame-level phone posteriors"};
  app.require_subcommand(1);

  DetectOptions detect_opt;
  CLI::App* detect = app.add_subcommand(
      "detect", "Per-frame language decisions and hypothesis CTMs at one "
                "prior weight");
  detect->set_config("--config");
  detect->add_option("--inventory", detect_opt.inventory,
                     "Phone inventory file")->required();
  detect->add_option("--input", detect_opt.input,
                     "FPM posterior file or directory")->required();
  detect->add_option("--out", detect_opt.out, "Output directory")->required();
  detect->add_option("--rule", detect_opt.rule,
                     "max-phone or max-language");
  detect->add_option("--w-l1", detect_opt.w_l1, "L1 prior weight in (0,1)");
  detect->add_option("--w-sil", detect_opt.w_sil, "Silence prior weight");
  detect->add_option("--frame-period", detect_opt.frame_period,
                     "Override the FPM header frame period");
  detect->callback([&]() { run_detect(detect_opt); });

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Trace a DET curve over a prior-weight grid and extract the "
               "EER");
  sweep->set_config("--config");
  sweep->add_option("--inventory", sweep_opt.inventory,
                    "Phone inventory file")->required();
  sweep->add_option("--input", sweep_opt.input,
                    "FPM directory, or per-weight CTM directories for the "
                    "baseline rule")->required();
  sweep->add_option("--ref", sweep_opt.ref,
                    "Reference CTM file or directory")->required();
  sweep->add_option("--out", sweep_opt.out, "Output directory")->required();
  sweep->add_option("--rule", sweep_opt.rule,
                    "baseline, max-phone or max-language");
  sweep->add_option("--grid", sweep_opt.grid,
                    "Grid point count, or a file with one ascending w_l1 "
                    "per line");
  sweep->add_option("--aggregate", sweep_opt.aggregate,
                    "pooled (frame-weighted, default) or averaged");
  sweep->add_option("--w-sil", sweep_opt.w_sil, "Silence prior weight");
  sweep->add_option("--frame-period", sweep_opt.frame_period,
                    "Frame period override (baseline default 0.01)");
  sweep->callback([&]() { run_sweep(sweep_opt); });

  AnalyzeOptions analyze_opt;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Switch counts and segment-duration histograms of "
                 "hypothesis vs reference CTMs");
  analyze->set_config("--config");
  analyze->add_option("--inventory", analyze_opt.inventory,
                      "Phone inventory file")->required();
  analyze->add_option("--input", analyze_opt.input,
                      "Hypothesis CTM file or directory")->required();
  analyze->add_option("--ref", analyze_opt.ref,
                      "Reference CTM file or directory")->required();
  analyze->add_option("--out", analyze_opt.out,
                      "Output directory")->required();
  analyze->add_option("--edges", analyze_opt.edges,
                      "Comma-separated ascending histogram edges in seconds");
  analyze->callback([&]() { run_analyze(analyze_opt); });

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic bilingual corpus (FPM posteriors plus "
               "reference CTMs)");
  synth->set_config("--config");
  synth->add_option("--out", synth_opt.out, "Output directory")->required();
  synth->add_flag("--force", synth_opt.force,
                  "Write into a non-empty output directory");
  synth->add_option("--seed", synth_opt.seed, "Corpus seed");
  synth->add_option("--n-utterances", synth_opt.n_utterances,
                    "Number of utterances");
  synth->add_option("--segments-per-utterance",
                    synth_opt.segments_per_utterance,
                    "Language segments per utterance");
  synth->add_option("--mean-segment-dur", synth_opt.mean_segment_dur,
                    "Mean language-segment duration in seconds");
  synth->add_option("--mean-sil-dur", synth_opt.mean_sil_dur,
                    "Mean inserted-silence duration in seconds");
  synth->add_option("--sil-prob", synth_opt.sil_prob,
                    "Silence insertion probability");
  synth->add_option("--switch-prob", synth_opt.switch_prob,
                    "Per-segment language switch probability");
  synth->add_option("--confusability", synth_opt.confusability,
                    "Max leak fraction toward the paired phone, in [0,1]");
  synth->add_option("--concentration", synth_opt.concentration,
                    "Posterior sharpness (> 0)");
  synth->add_option("--frame-period", synth_opt.frame_period,
                    "Frame period in seconds");
  synth->add_option("--l1-name", synth_opt.l1_name, "First language name");
  synth->add_option("--l2-name", synth_opt.l2_name, "Second language name");
  synth->add_option("--l1-phones", synth_opt.l1_phones,
                    "Comma-separated L1 phone names");
  synth->add_option("--l2-phones", synth_opt.l2_phones,
                    "Comma-separated L2 phone names");
  synth->add_option("--sil-phones", synth_opt.sil_phones,
                    "Comma-separated silence phone names");
  synth->add_option("--pairs", synth_opt.pairs,
                    "Comma-separated confusable pairs, each "
                    "<l1phone>:<l2phone>");
  synth->callback([&]() { run_synth(synth_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const csd::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const csd::MetricDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
