/*
 * Copyright 2026 The microscope authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "microscope/tree_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "microscope/error.hpp"

namespace microscope {
namespace {

constexpr char kMagic[4] = {'B', 'T', 'R', 'E'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    if (pos_ + 8 > bytes_.size()) throw Error(ErrorCode::SpecParse, "truncated tree file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  void expect_magic() {
    if (bytes_.size() < 4 || std::memcmp(bytes_.data(), kMagic, 4) != 0) {
      throw Error(ErrorCode::SpecParse, "missing BTRE magic");
    }
    pos_ = 4;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

nlohmann::json tree_to_json(const CodedTree& t) {
  nlohmann::json j;
  j["base"] = t.params().base;
  j["dim"] = t.params().dim;
  j["height"] = t.height();
  j["levels"] = t.levels();
  return j;
}

CodedTree tree_from_json(const nlohmann::json& j) {
  try {
    TreeParams p(j.at("base").get<int>(), j.at("dim").get<int>());
    auto levels = j.at("levels").get<std::vector<std::vector<std::uint64_t>>>();
    if (j.contains("height") && j.at("height").get<int>() + 1 != static_cast<int>(levels.size())) {
      throw Error(ErrorCode::SpecParse, "height does not match level count");
    }
    return CodedTree(p, std::move(levels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecParse, e.what());
  }
}

std::vector<std::uint8_t> tree_to_binary(const CodedTree& t) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u64(out, static_cast<std::uint64_t>(t.params().base));
  put_u64(out, static_cast<std::uint64_t>(t.params().dim));
  put_u64(out, static_cast<std::uint64_t>(t.height()));
  for (const auto& lvl : t.levels()) {
    put_u64(out, lvl.size());
    for (std::uint64_t v : lvl) put_u64(out, v);
  }
  return out;
}

CodedTree tree_from_binary(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.expect_magic();
  const std::uint64_t base = r.u64();
  const std::uint64_t dim = r.u64();
  const std::uint64_t height = r.u64();
  if (base > 1u << 16 || dim > 64 || height > 64) throw Error(ErrorCode::SpecParse, "implausible tree header");
  TreeParams p(static_cast<int>(base), static_cast<int>(dim));
  std::vector<std::vector<std::uint64_t>> levels(height + 1);
  for (auto& lvl : levels) {
    const std::uint64_t count = r.u64();
    if (count > r.remaining() / 8) throw Error(ErrorCode::SpecParse, "truncated tree file");
    lvl.resize(count);
    for (auto& v : lvl) v = r.u64();
  }
  if (r.remaining() != 0) throw Error(ErrorCode::SpecParse, "trailing bytes after tree");
  return CodedTree(p, std::move(levels));
}

void save_tree(const CodedTree& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  if (ends_with(path, ".json")) {
    out << tree_to_json(t).dump() << '\n';
  } else {
    auto bytes = tree_to_binary(t);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

CodedTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) return tree_from_binary(bytes);
  try {
    return tree_from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SpecParse, path + ": " + e.what());
  }
}

}  // namespace microscope
