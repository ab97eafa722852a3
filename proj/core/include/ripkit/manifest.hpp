#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ripkit {

// FNV-1a 64-bit content digests for run provenance.
std::uint64_t fnv1a64(const std::string& data);
std::string digest_hex(const std::string& data);
std::string digest_file_hex(const std::string& path);

// Every CLI run emits one of these; identical manifests (minus wall time)
// imply identical outputs because all randomness flows from the recorded
// seed and inputs.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> args;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;
  double wall_ms = 0.0;

  std::string to_json() const;
};

}  // namespace ripkit
