#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "seac/nn/mlp.h"

namespace seac::nn {

inline constexpr char kCheckpointMagic[8] = {'S', 'E', 'A', 'C', 'N', 'E', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedNetwork {
  std::string name;
  MlpParams<float> params;
};

/// Binary network bundle.
///
/// Layout (all integers u32 little-endian, strings as length + bytes):
///   magic[8] version
///   tag_count { key value }*
///   network_count { name activation layer_count { rows cols }* }*
///   parameters: f32 little-endian, network by network in declaration order
///   (per layer: weight row-major, then bias)
struct Checkpoint {
  std::vector<std::pair<std::string, std::string>> tags;
  std::vector<NamedNetwork> networks;

  /// Empty string when absent.
  std::string tag(const std::string& key) const;
  void set_tag(const std::string& key, const std::string& value);
  const MlpParams<float>& network(const std::string& name) const;
  bool has_network(const std::string& name) const;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace seac::nn
