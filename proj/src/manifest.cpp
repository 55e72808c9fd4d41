#include "integrity/manifest.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <memory>
#include <stdexcept>

#include "integrity/common.hpp"

namespace integrity {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }

  void update(std::string_view data) {
    if (EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) {
      throw std::runtime_error("SHA-256 update failed");
    }
  }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md, &len) != 1) {
      throw std::runtime_error("SHA-256 finalisation failed");
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kDigits[md[i] >> 4];
      out += kDigits[md[i] & 0xf];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data);
  return h.hex();
}

std::string digest_files(const std::vector<std::string>& paths) {
  Sha256 h;
  for (const auto& path : paths) {
    const auto name = std::filesystem::path(path).filename().string();
    const auto content = read_file(path);
    h.update(name);
    h.update(std::string_view("\0", 1));
    h.update(std::to_string(content.size()));
    h.update(std::string_view("\0", 1));
    h.update(content);
  }
  return h.hex();
}

std::string RunManifest::render() const {
  std::string out;
  out += "command=" + command + "\n";
  out += "tool_version=" + tool_version + "\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out += "input." + std::to_string(i + 1) + "=" + inputs[i] + "\n";
  }
  if (!config_path.empty()) out += "config=" + config_path + "\n";
  if (!edition_id.empty()) out += "edition_id=" + edition_id + "\n";
  for (const auto& [name, window] : windows) out += "window." + name + "=" + window + "\n";
  out += "input_sha256=" + input_digest + "\n";
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out += "output." + std::to_string(i + 1) + "=" + outputs[i] + "\n";
  }
  return out;
}

}  // namespace integrity
