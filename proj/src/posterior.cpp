// src/posterior.cpp

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

#include "csdetect/posterior.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <vector>

#include "csdetect/errors.hpp"

namespace csd {

namespace {

std::string location(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line;
  return os.str();
}

// getline that tolerates CRLF input.
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

double parse_double(std::string_view token, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError(where + ": cannot parse number '" + std::string(token) +
                     "'");
  }
  return value;
}

std::uint64_t parse_count(std::string_view token, const std::string& where) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError(where + ": cannot parse count '" + std::string(token) +
                     "'");
  }
  return value;
}

// key=value field of a header line.
std::string_view header_field(std::string_view token, std::string_view key,
                              const std::string& where) {
  if (token.size() <= key.size() + 1 || !token.starts_with(key) ||
      token[key.size()] != '=') {
    throw InputError(where + ": expected '" + std::string(key) +
                     "=<value>' but found '" + std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

PhoneInventory parse_inventory(std::istream& in,
                               std::string_view source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) {
    throw InputError(std::string(source_name) + ": empty inventory file");
  }
  auto header = split_ws(line);
  if (header.size() != 4 || header[0] != "#inventory" || header[1] != "v1") {
    throw InputError(location(source_name, line_no) +
                     ": expected header '#inventory v1 l1=<name> l2=<name>'");
  }
  std::string l1(header_field(header[2], "l1", location(source_name, 1)));
  std::string l2(header_field(header[3], "l2", location(source_name, 1)));

  std::vector<Phone> phones;
  while (next_line(in, line, line_no)) {
    if (line.empty()) continue;
    if (line[0] == '#') continue;  // comment
    auto fields = split_ws(line);
    if (fields.size() != 2) {
      throw InputError(location(source_name, line_no) +
                       ": expected '<phone> <class>' but found '" + line +
                       "'");
    }
    LanguageClass cls;
    if (fields[1] == l1) {
      cls = LanguageClass::kL1;
    } else if (fields[1] == l2) {
      cls = LanguageClass::kL2;
    } else if (fields[1] == "sil") {
      cls = LanguageClass::kSil;
    } else {
      throw InputError(location(source_name, line_no) +
                       ": unknown class token '" + std::string(fields[1]) +
                       "' (expected '" + l1 + "', '" + l2 + "' or 'sil')");
    }
    phones.push_back(Phone{std::string(fields[0]), cls});
  }

  try {
    return PhoneInventory(std::move(phones), std::move(l1), std::move(l2));
  } catch (const InputError& e) {
    throw InputError(std::string(source_name) + ": " + e.what());
  }
}

std::string write_inventory(const PhoneInventory& inventory) {
  std::string out = "#inventory v1 l1=" + inventory.l1_name() +
                    " l2=" + inventory.l2_name() + "\n";
  for (const Phone& p : inventory.phones()) {
    out += p.name;
    out += ' ';
    out += inventory.class_name(p.cls);
    out += '\n';
  }
  return out;
}

PosteriorMatrix load_posteriors(std::istream& in,
                                const PhoneInventory& inventory,
                                std::string_view source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) {
    throw InputError(std::string(source_name) + ": empty posterior file");
  }
  auto header = split_ws(line);
  if (header.size() != 6 || header[0] != "#fpm" || header[1] != "v1") {
    throw InputError(
        location(source_name, line_no) +
        ": expected header '#fpm v1 utt=<id> frames=<T> phones=<P> "
        "frame_period=<seconds>'");
  }
  const std::string where = location(source_name, 1);
  std::string utt(header_field(header[2], "utt", where));
  std::uint64_t frames = parse_count(header_field(header[3], "frames", where),
                                     where);
  std::uint64_t phones = parse_count(header_field(header[4], "phones", where),
                                     where);
  double frame_period =
      parse_double(header_field(header[5], "frame_period", where), where);

  if (frames == 0) {
    throw InputError(where + ": declared frame count is zero");
  }
  if (phones != inventory.size()) {
    std::ostringstream os;
    os << where << ": file declares " << phones << " phones but the inventory"
       << " has " << inventory.size();
    throw InputError(os.str());
  }
  if (!(frame_period > 0.0) || !std::isfinite(frame_period)) {
    throw InputError(where + ": frame_period must be positive");
  }

  if (!next_line(in, line, line_no)) {
    throw InputError(std::string(source_name) + ": missing '#phones' line");
  }
  auto phone_line = split_ws(line);
  if (phone_line.empty() || phone_line[0] != "#phones" ||
      phone_line.size() != inventory.size() + 1) {
    throw InputError(location(source_name, line_no) +
                     ": expected '#phones' followed by " +
                     std::to_string(inventory.size()) + " names");
  }
  for (std::size_t p = 0; p < inventory.size(); ++p) {
    if (phone_line[p + 1] != inventory.phone(p).name) {
      throw InputError(location(source_name, line_no) + ": phone " +
                       std::to_string(p) + " is '" +
                       std::string(phone_line[p + 1]) +
                       "' but the inventory has '" + inventory.phone(p).name +
                       "' at that position");
    }
  }

  PosteriorMatrix matrix(std::move(utt), frame_period, frames,
                         inventory.size());
  std::size_t t = 0;
  while (t < frames) {
    if (!next_line(in, line, line_no)) {
      throw InputError(std::string(source_name) + ": file ended after " +
                       std::to_string(t) + " of " + std::to_string(frames) +
                       " frame rows");
    }
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (fields.size() != inventory.size()) {
      std::ostringstream os;
      os << location(source_name, line_no) << ": expected "
         << inventory.size() << " values but found " << fields.size();
      throw InputError(os.str());
    }
    auto row = matrix.row(t);
    for (std::size_t p = 0; p < fields.size(); ++p) {
      double v = parse_double(fields[p], location(source_name, line_no));
      if (!std::isfinite(v)) {
        throw InputError(location(source_name, line_no) +
                         ": non-finite posterior value");
      }
      if (v < 0.0) {
        std::ostringstream os;
        os << location(source_name, line_no) << ": negative posterior value "
           << v;
        throw InputError(os.str());
      }
      row[p] = v;
    }
    ++t;
  }
  while (next_line(in, line, line_no)) {
    if (!line.empty() && line[0] != '#') {
      throw InputError(location(source_name, line_no) +
                       ": unexpected content after the declared " +
                       std::to_string(frames) + " frame rows");
    }
  }
  return matrix;
}

std::string write_posteriors(const PosteriorMatrix& matrix,
                             const PhoneInventory& inventory) {
  if (matrix.num_phones() != inventory.size()) {
    throw InputError("write_posteriors: matrix for utterance '" +
                     matrix.utterance_id() + "' has " +
                     std::to_string(matrix.num_phones()) +
                     " columns but the inventory has " +
                     std::to_string(inventory.size()) + " phones");
  }
  char buf[64];
  std::string out = "#fpm v1 utt=" + matrix.utterance_id() +
                    " frames=" + std::to_string(matrix.num_frames()) +
                    " phones=" + std::to_string(matrix.num_phones()) +
                    " frame_period=";
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf),
                                 matrix.frame_period());
  out.append(buf, end);
  out += "\n#phones";
  for (const Phone& p : inventory.phones()) {
    out += ' ';
    out += p.name;
  }
  out += '\n';
  for (std::size_t t = 0; t < matrix.num_frames(); ++t) {
    auto row = matrix.row(t);
    for (std::size_t p = 0; p < row.size(); ++p) {
      int n = std::snprintf(buf, sizeof(buf), "%.9g", row[p]);
      if (p > 0) out += ' ';
      out.append(buf, static_cast<std::size_t>(n));
    }
    out += '\n';
  }
  return out;
}

PosteriorMatrix l1_normalize(const PosteriorMatrix& matrix) {
  PosteriorMatrix out(matrix.utterance_id(), matrix.frame_period(),
                      matrix.num_frames(), matrix.num_phones());
  for (std::size_t t = 0; t < matrix.num_frames(); ++t) {
    auto src = matrix.row(t);
    double sum = 0.0;
    for (double v : src) sum += v;
    if (!(sum > 0.0)) {
      throw InputError("l1_normalize: all-zero posterior row at frame " +
                       std::to_string(t) + " of utterance '" +
                       matrix.utterance_id() + "'");
    }
    auto dst = out.row(t);
    for (std::size_t p = 0; p < src.size(); ++p) dst[p] = src[p] / sum;
  }
  return out;
}

PosteriorMatrix apply_language_prior(const PosteriorMatrix& matrix,
                                     const PhoneInventory& inventory,
                                     const PriorWeights& weights) {
  if (matrix.num_phones() != inventory.size()) {
    throw InputError("apply_language_prior: matrix for utterance '" +
                     matrix.utterance_id() + "' does not match the inventory");
  }
  std::vector<double> multiplier(inventory.size());
  for (std::size_t p = 0; p < inventory.size(); ++p) {
    multiplier[p] = weights.for_class(inventory.class_of(p));
  }
  PosteriorMatrix out(matrix.utterance_id(), matrix.frame_period(),
                      matrix.num_frames(), matrix.num_phones());
  for (std::size_t t = 0; t < matrix.num_frames(); ++t) {
    auto src = matrix.row(t);
    auto dst = out.row(t);
    double sum = 0.0;
    for (std::size_t p = 0; p < src.size(); ++p) {
      dst[p] = src[p] * multiplier[p];
      sum += dst[p];
    }
    if (!(sum > 0.0)) {
      throw InputError("apply_language_prior: zero row mass at frame " +
                       std::to_string(t) + " of utterance '" +
                       matrix.utterance_id() + "'");
    }
    for (double& v : dst) v /= sum;
  }
  return out;
}

LanguagePosteriorMatrix language_posteriors(const PosteriorMatrix& matrix,
                                            const PhoneInventory& inventory) {
  if (matrix.num_phones() != inventory.size()) {
    throw InputError("language_posteriors: matrix for utterance '" +
                     matrix.utterance_id() +
                     "' has " + std::to_string(matrix.num_phones()) +
                     " columns but the inventory has " +
                     std::to_string(inventory.size()) + " phones");
  }
  LanguagePosteriorMatrix out;
  out.utterance_id = matrix.utterance_id();
  out.frame_period = matrix.frame_period();
  out.rows.resize(matrix.num_frames());

  std::array<std::vector<double>, kNumClasses> bucket;
  for (auto& b : bucket) b.reserve(matrix.num_phones());

  for (std::size_t t = 0; t < matrix.num_frames(); ++t) {
    auto row = matrix.row(t);
    for (auto& b : bucket) b.clear();
    for (std::size_t p = 0; p < row.size(); ++p) {
      bucket[class_index(inventory.class_of(p))].push_back(row[p]);
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      // Ascending-value summation: deterministic and bitwise invariant
      // under permutations of the phones within a class.
      std::sort(bucket[c].begin(), bucket[c].end());
      double sum = 0.0;
      for (double v : bucket[c]) sum += v;
      out.rows[t][c] = sum;
    }
  }
  return out;
}

}  // namespace csd
