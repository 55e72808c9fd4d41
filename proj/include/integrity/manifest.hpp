#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace integrity {

std::string sha256_hex(std::string_view data);

// Digest over the base name and bytes of each file, in the given order.
// Independent of directory location and timestamps.
std::string digest_files(const std::vector<std::string>& paths);

// Provenance record written next to every output set.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::string config_path;
  std::string edition_id;
  std::vector<std::pair<std::string, std::string>> windows;  // name -> "2018-2019"
  std::string tool_version;
  std::string input_digest;
  std::vector<std::string> outputs;

  // key=value text; no timestamps.
  std::string render() const;
};

}  // namespace integrity
