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

#include "fairmpc/fpsh.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>

#include "fairmpc/error.hpp"

namespace fairmpc {
namespace {

constexpr std::size_t kHeaderBytes = 15;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

bool valid_type(std::uint8_t t) { return t >= 1 && t <= 8; }

std::string matrix_pool_name(const MatShape& s) {
  std::ostringstream name;
  name << "matrix_" << s.m << "x" << s.k << "x" << s.l << ".fpsh";
  return name.str();
}

}  // namespace

std::size_t prefix_words(ObjectType type) {
  switch (type) {
    case ObjectType::kMatrixTriples: return 3;
    case ObjectType::kCommitment: return 2;
    default: return 0;
  }
}

std::vector<std::uint8_t> encode_container(const Container& c) {
  if (c.prefix.size() != prefix_words(c.type)) {
    throw Error(ErrorCode::kBadFormat, "container prefix has the wrong length");
  }
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (c.body.rows() > kMax || c.body.cols() > kMax) {
    throw Error(ErrorCode::kBadFormat, "container shape exceeds 32 bits");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 8 * (c.prefix.size() + c.body.size()));
  out.insert(out.end(), {'F', 'P', 'S', 'H'});
  out.push_back(kFpshVersion);
  out.push_back(static_cast<std::uint8_t>(c.party));
  out.push_back(static_cast<std::uint8_t>(c.type));
  put_u32(out, static_cast<std::uint32_t>(c.body.rows()));
  put_u32(out, static_cast<std::uint32_t>(c.body.cols()));
  for (Ring v : c.prefix) put_u64(out, v);
  for (Ring v : c.body.values()) put_u64(out, v);
  return out;
}

Container decode_container(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes || bytes[0] != 'F' || bytes[1] != 'P' ||
      bytes[2] != 'S' || bytes[3] != 'H') {
    throw Error(ErrorCode::kBadFormat, "missing FPSH magic");
  }
  if (bytes[4] != kFpshVersion) {
    throw Error(ErrorCode::kBadFormat, "unsupported FPSH version");
  }
  if (bytes[5] != 1 && bytes[5] != 2) {
    throw Error(ErrorCode::kBadFormat, "bad party byte");
  }
  if (!valid_type(bytes[6])) throw Error(ErrorCode::kBadFormat, "bad object type");
  Container c;
  c.party = static_cast<Party>(bytes[5]);
  c.type = static_cast<ObjectType>(bytes[6]);
  const std::size_t rows = get_le(&bytes[7], 4);
  const std::size_t cols = get_le(&bytes[11], 4);
  const std::size_t prefix = prefix_words(c.type);
  if (bytes.size() != kHeaderBytes + 8 * (prefix + rows * cols)) {
    throw Error(ErrorCode::kBadFormat, "payload length does not match header");
  }
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < prefix; ++i, p += 8) c.prefix.push_back(get_le(p, 8));
  std::vector<Ring> data(rows * cols);
  for (auto& v : data) {
    v = get_le(p, 8);
    p += 8;
  }
  c.body = RingMatrix(rows, cols, std::move(data));
  return c;
}

void write_container(const std::filesystem::path& path, const Container& c) {
  const auto bytes = encode_container(c);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

Container read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_container(bytes);
}

void save_triple_set(const std::filesystem::path& dir, const TripleSet& set) {
  std::filesystem::create_directories(dir);
  const Party party = set.party();
  for (const auto& [shape, pool] : set.matrix_pool) {
    const std::size_t width = shape.m * shape.k + shape.k * shape.l + shape.m * shape.l;
    RingMatrix body(pool.size(), width);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      std::size_t j = 0;
      for (const RingMatrix* part : {&pool[i].a, &pool[i].b, &pool[i].c}) {
        for (Ring v : part->values()) body(i, j++) = v;
      }
    }
    write_container(dir / matrix_pool_name(shape),
                    Container{party, ObjectType::kMatrixTriples,
                              {shape.m, shape.k, shape.l}, std::move(body)});
  }
  RingMatrix had(set.hadamard_pool.size(), 3);
  for (std::size_t i = 0; i < set.hadamard_pool.size(); ++i) {
    had(i, 0) = set.hadamard_pool[i].a;
    had(i, 1) = set.hadamard_pool[i].b;
    had(i, 2) = set.hadamard_pool[i].c;
  }
  write_container(dir / "hadamard.fpsh",
                  Container{party, ObjectType::kHadamardTriples, {}, std::move(had)});
  RingMatrix conv(set.conversion_pool.size(), 4);
  for (std::size_t i = 0; i < set.conversion_pool.size(); ++i) {
    const auto& t = set.conversion_pool[i];
    conv(i, 0) = t.rho;
    conv(i, 1) = t.rho_bits;
    conv(i, 2) = t.dabit;
    conv(i, 3) = t.dabit_xor;
  }
  write_container(dir / "conversion.fpsh",
                  Container{party, ObjectType::kConversionTuples, {}, std::move(conv)});
  RingMatrix ands(set.and_pool.size(), 3);
  for (std::size_t i = 0; i < set.and_pool.size(); ++i) {
    ands(i, 0) = set.and_pool[i].a;
    ands(i, 1) = set.and_pool[i].b;
    ands(i, 2) = set.and_pool[i].c;
  }
  write_container(dir / "and.fpsh",
                  Container{party, ObjectType::kAndTriples, {}, std::move(ands)});
  write_container(dir / "odd.fpsh",
                  Container{party, ObjectType::kOddMasks, {},
                            RingMatrix::column(set.odd_pool)});
}

TripleSet load_triple_set(const std::filesystem::path& dir, Party party) {
  TripleSet set(party);
  auto load = [&](const std::filesystem::path& path, ObjectType type,
                  std::size_t width) {
    Container c = read_container(path);
    if (c.type != type || c.party != party) {
      throw Error(ErrorCode::kBadFormat, "unexpected pool file " + path.string());
    }
    if (width != 0 && c.body.cols() != width && c.body.rows() != 0) {
      throw Error(ErrorCode::kBadFormat, "bad pool width in " + path.string());
    }
    return c;
  };
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "no triple directory " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("matrix_", 0) != 0) continue;
    Container c = load(entry.path(), ObjectType::kMatrixTriples, 0);
    const MatShape shape{c.prefix[0], c.prefix[1], c.prefix[2]};
    const std::size_t mk = shape.m * shape.k, kl = shape.k * shape.l,
                      ml = shape.m * shape.l;
    if (c.body.rows() != 0 && c.body.cols() != mk + kl + ml) {
      throw Error(ErrorCode::kBadFormat, "matrix pool width mismatch");
    }
    auto& pool = set.matrix_pool[shape];
    for (std::size_t i = 0; i < c.body.rows(); ++i) {
      auto row = c.body.values().subspan(i * c.body.cols(), c.body.cols());
      pool.push_back(MatrixTriple{
          RingMatrix(shape.m, shape.k, {row.begin(), row.begin() + mk}),
          RingMatrix(shape.k, shape.l, {row.begin() + mk, row.begin() + mk + kl}),
          RingMatrix(shape.m, shape.l, {row.begin() + mk + kl, row.end()})});
    }
  }
  Container had = load(dir / "hadamard.fpsh", ObjectType::kHadamardTriples, 3);
  for (std::size_t i = 0; i < had.body.rows(); ++i) {
    set.hadamard_pool.push_back({had.body(i, 0), had.body(i, 1), had.body(i, 2)});
  }
  Container conv = load(dir / "conversion.fpsh", ObjectType::kConversionTuples, 4);
  for (std::size_t i = 0; i < conv.body.rows(); ++i) {
    set.conversion_pool.push_back({conv.body(i, 0), conv.body(i, 1), conv.body(i, 2),
                                   static_cast<std::uint8_t>(conv.body(i, 3) & 1)});
  }
  Container ands = load(dir / "and.fpsh", ObjectType::kAndTriples, 3);
  for (std::size_t i = 0; i < ands.body.rows(); ++i) {
    set.and_pool.push_back({ands.body(i, 0), ands.body(i, 1), ands.body(i, 2)});
  }
  Container odd = load(dir / "odd.fpsh", ObjectType::kOddMasks, 1);
  set.odd_pool.assign(odd.body.values().begin(), odd.body.values().end());
  return set;
}

void save_share(const std::filesystem::path& path, const Share& share) {
  write_container(path, Container{share.party, ObjectType::kShareMatrix, {}, share.values});
}

Share load_share(const std::filesystem::path& path) {
  Container c = read_container(path);
  if (c.type != ObjectType::kShareMatrix) {
    throw Error(ErrorCode::kBadFormat, path.string() + " is not a share file");
  }
  return Share{c.party, std::move(c.body)};
}

}  // namespace fairmpc
