#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rldwa/net.hpp"

namespace rldwa {

/// Archive entry: a named rows x cols tensor (cols 1 for vectors, 1x1 for
/// scalars). Values are stored as little-endian float32; in-memory math
/// stays double.
struct NamedTensor {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};

/// Serializes tensors to the RLDWA1 container: the magic line, a plain-text
/// manifest of one `<name> <rows> <cols>` line per tensor, a `data` marker,
/// then the packed float32 payload in manifest order.
std::vector<std::uint8_t> save_tensors(const std::vector<NamedTensor>& tensors);

/// Parses an RLDWA1 container. Throws std::runtime_error on a bad magic,
/// malformed manifest, or truncated payload.
std::vector<NamedTensor> load_tensors(const std::vector<std::uint8_t>& bytes);

void write_tensor_file(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_tensor_file(const std::string& path);

/// Flattens an Mlp into `<prefix>.<i>.W` / `<prefix>.<i>.b` entries.
void append_mlp_tensors(std::vector<NamedTensor>& out, const std::string& prefix, const Mlp& net);

/// Rebuilds an Mlp from its archive entries; validates that consecutive
/// layer shapes chain and names the offending layer if not.
Mlp mlp_from_tensors(const std::vector<NamedTensor>& tensors, const std::string& prefix);

const NamedTensor* find_tensor(const std::vector<NamedTensor>& tensors, const std::string& name);
double scalar_from_tensors(const std::vector<NamedTensor>& tensors, const std::string& name);

}  // namespace rldwa
