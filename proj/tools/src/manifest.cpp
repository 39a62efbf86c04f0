#include "tskan_cli/manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "tskan/error.hpp"

namespace tskan::cli {

namespace {

struct DigestContext {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

  DigestContext() {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("SHA-256 unavailable");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx.get(), data, n) != 1) throw IoError("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw IoError("SHA-256 final failed");
    std::string out;
    out.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", md[i]);
      out += buf;
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  DigestContext d;
  d.update(bytes.data(), bytes.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "' for hashing");
  DigestContext d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

void RunManifest::add_artifact(const std::string& relative) {
  const std::filesystem::path p = std::filesystem::path(output_dir) / relative;
  std::error_code ec;
  const auto size = std::filesystem::file_size(p, ec);
  if (ec) throw IoError("cannot stat '" + p.string() + "': " + ec.message());
  artifacts.push_back({relative, sha256_file(p), size});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& a : artifacts) files.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  return {{"command", command},
          {"config", config},
          {"seeds", seeds},
          {"inputs", inputs},
          {"output_dir", output_dir},
          {"duration_seconds", duration_seconds},
          {"artifacts", files}};
}

}  // namespace tskan::cli
