/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// FPSH container: the on-disk format for shares, dealer pools, models and
// commitments.
//
//   offset  size  field
//   0       4     magic "FPSH"
//   4       1     version (1)
//   5       1     party (1 = modeler, 2 = regulator)
//   6       1     object type (ObjectType)
//   7       4     rows, uint32 little-endian
//   11      4     cols, uint32 little-endian
//   15      8*k   ring elements, uint64 little-endian
//
// k = prefix_words(type) + rows * cols. Matrix-triple pools carry the triple
// shape (m, k, l) as a 3-word prefix; commitments carry (session id, unix
// time). Every other type has no prefix.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fairmpc/ring_matrix.hpp"
#include "fairmpc/share.hpp"
#include "fairmpc/triples.hpp"

namespace fairmpc {

inline constexpr std::uint8_t kFpshVersion = 1;

enum class ObjectType : std::uint8_t {
  kShareMatrix = 1,
  kMatrixTriples = 2,
  kHadamardTriples = 3,
  kConversionTuples = 4,
  kAndTriples = 5,
  kOddMasks = 6,
  kModel = 7,
  kCommitment = 8,
};

std::size_t prefix_words(ObjectType type);

struct Container {
  Party party = Party::kModeler;
  ObjectType type = ObjectType::kShareMatrix;
  std::vector<Ring> prefix;
  RingMatrix body;
};

std::vector<std::uint8_t> encode_container(const Container& c);
// Throws kBadFormat on a bad magic, version, party, type or length.
Container decode_container(const std::vector<std::uint8_t>& bytes);

void write_container(const std::filesystem::path& path, const Container& c);
Container read_container(const std::filesystem::path& path);

// A party's pools as one file per pool inside `dir`.
void save_triple_set(const std::filesystem::path& dir, const TripleSet& set);
TripleSet load_triple_set(const std::filesystem::path& dir, Party party);

void save_share(const std::filesystem::path& path, const Share& share);
Share load_share(const std::filesystem::path& path);

}  // namespace fairmpc
