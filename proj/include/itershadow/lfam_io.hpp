#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "itershadow/layer_family.hpp"

namespace itershadow {

inline constexpr char kLfamMagic[] = "LFAMv001";

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

/// Membership bit vector as LFAM payload bytes (LSB-first, colex order).
std::vector<std::uint8_t> lfam_payload(const LayerFamily& family);

/// Whole LFAM file image: magic, n (u32 LE), k (u32 LE), payload.
std::vector<std::uint8_t> encode_lfam(const LayerFamily& family);
LayerFamily decode_lfam(std::span<const std::uint8_t> bytes, ExactCapacity cap = {});

struct LfamManifest {
  int n = 0;
  int k = 0;
  std::uint64_t popcount = 0;
  std::uint64_t checksum = 0;
};

LfamManifest make_manifest(const LayerFamily& family);
std::string manifest_json(const LfamManifest& m);
LfamManifest parse_manifest(const std::string& json_text);

/// Sidecar path: "<path>.json".
std::filesystem::path manifest_path(const std::filesystem::path& lfam_path);

/// Writes the LFAM file and its sidecar manifest.
void write_lfam(const std::filesystem::path& path, const LayerFamily& family);

/// Reads an LFAM file; when the sidecar exists its n, k, popcount and checksum
/// must match or ValidationError is thrown.
LayerFamily read_lfam(const std::filesystem::path& path, ExactCapacity cap = {});

}  // namespace itershadow
