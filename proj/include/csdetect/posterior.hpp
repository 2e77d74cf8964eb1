// include/csdetect/posterior.hpp

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

#ifndef CSDETECT_POSTERIOR_H_
#define CSDETECT_POSTERIOR_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "csdetect/types.hpp"

namespace csd {

// Inventory file format (text, UTF-8, LF):
//   line 1:  #inventory v1 l1=<name> l2=<name>
//   then one line per phone:  <phone> <class>
// where <class> is the l1 name, the l2 name or "sil".  '#' lines after the
// first are comments.
PhoneInventory parse_inventory(std::istream& in,
                               std::string_view source_name = "<inventory>");
std::string write_inventory(const PhoneInventory& inventory);

// FPM posterior file format (text, UTF-8, LF):
//   line 1:  #fpm v1 utt=<id> frames=<T> phones=<P> frame_period=<seconds>
//   line 2:  #phones <p1> <p2> ... <pP>
//   then T lines of P space-separated decimal reals.
// The declared phone list must match the inventory names and order.  Values
// are returned as parsed, not yet normalized.
PosteriorMatrix load_posteriors(std::istream& in,
                                const PhoneInventory& inventory,
                                std::string_view source_name = "<fpm>");

// Serializes with 9 significant digits per value.
std::string write_posteriors(const PosteriorMatrix& matrix,
                             const PhoneInventory& inventory);

// Divides each row by its sum.  Rows sum to 1 within 1e-9 afterwards; an
// all-zero row is an error because it signals a corrupt export.
PosteriorMatrix l1_normalize(const PosteriorMatrix& matrix);

// Multiplies every entry by its class weight (w_l1, w_l2 or w_sil) and
// renormalizes each row.  With equal multipliers for all three classes the
// output equals the input within 1e-12 per entry.
PosteriorMatrix apply_language_prior(const PosteriorMatrix& matrix,
                                     const PhoneInventory& inventory,
                                     const PriorWeights& weights);

// Collapses phone posteriors into the three class posteriors by summing all
// same-class phones per frame.  Addends are summed in ascending value order,
// which makes the result deterministic and invariant under permutations of
// the phones inside one class.
LanguagePosteriorMatrix language_posteriors(const PosteriorMatrix& matrix,
                                            const PhoneInventory& inventory);

}  // namespace csd

#endif  // CSDETECT_POSTERIOR_H_
