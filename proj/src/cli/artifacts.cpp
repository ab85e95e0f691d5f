#include "sgflab/cli/artifacts.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "sgflab/errors.hpp"

namespace sgflab::cli {

namespace {

void write_atomic(const std::filesystem::path& target, std::string_view content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

nlohmann::json write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts,
                               nlohmann::json manifest) {
  std::filesystem::create_directories(dir);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& a : artifacts) {
    write_atomic(dir / a.name, a.content);
    list.push_back({{"file", a.name}, {"sha256", sha256_hex(a.content)}, {"bytes", a.content.size()}});
  }
  manifest["artifacts"] = std::move(list);
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  const nlohmann::json m = nlohmann::json::parse(read_file(dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const auto& a : m.at("artifacts")) {
    const std::string name = a.at("file").get<std::string>();
    std::string content;
    try {
      content = read_file(dir / name);
    } catch (const Error&) {
      bad.push_back(name);
      continue;
    }
    if (sha256_hex(content) != a.at("sha256").get<std::string>()) bad.push_back(name);
  }
  return bad;
}

}  // namespace sgflab::cli
