#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "contact/head.hpp"
#include "contact/parameters.hpp"

namespace contact {

// Binary, little-endian, self-describing:
//   "CNTCKPT\0" | u32 version | u32 n_meta | n_meta x (str key, str value)
//   | u32 n_tensors | n_tensors x (str name, u32 rank, rank x u64 extent,
//   numel x f64 value)
// where str is a u32 byte length followed by the bytes. Values are stored
// bit-exactly.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Throws CheckpointError on truncation, bad magic or version mismatch.
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Copies tensors into `params` by name. Missing, unexpected, or mis-shaped
// tensors throw CheckpointError naming every offender.
void load_parameters(const Checkpoint& ckpt, ParameterList& params);

std::map<std::string, std::string> head_config_meta(const HeadConfig& config);
HeadConfig head_config_from_meta(const std::map<std::string, std::string>& meta);

void save_model(const std::filesystem::path& path, const ContactHead& model);
ContactHead load_model(const std::filesystem::path& path);

}  // namespace contact
