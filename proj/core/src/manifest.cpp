#include "ripkit/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ripkit/version.hpp"

namespace ripkit {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& data) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

std::string digest_file_hex(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return digest_hex(ss.str());
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = kSchemaVersion;
  j["kind"] = "run_manifest";
  j["command"] = command;
  j["args"] = args;
  j["seed"] = seed;
  j["tool_version"] = tool_version.empty() ? kVersion : tool_version;
  j["input_digests"] = input_digests;
  j["output_digests"] = output_digests;
  j["wall_ms"] = wall_ms;
  return j.dump();
}

}  // namespace ripkit
