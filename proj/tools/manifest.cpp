// Copyright 2026 The depthpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>

#include "depthpose/error.hpp"

namespace depthpose::cli {

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kLoad, "SHA-256 initialization failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

nlohmann::json RunManifest::ToJson() const {
  nlohmann::json j;
  j["command"] = command;
  j["args"] = args;
  j["config"] = config;
  j["seed"] = seed;
  j["inputs"] = inputs;
  std::vector<std::filesystem::path> sorted = outputs;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& p : sorted) {
    outs.push_back({{"path", p.generic_string()}, {"sha256", Sha256File(root / p)}});
  }
  j["outputs"] = outs;
  return j;
}

void RunManifest::Write(const std::filesystem::path& path) const {
  const nlohmann::json j = ToJson();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace depthpose::cli
