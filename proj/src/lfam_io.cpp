#include "itershadow/lfam_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "itershadow/errors.hpp"

namespace itershadow {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> lfam_payload(const LayerFamily& family) {
  const std::size_t nbytes = (family.layer_size() + 7) / 8;
  std::vector<std::uint8_t> out(nbytes, 0);
  const auto words = family.words();
  for (std::size_t i = 0; i < nbytes; ++i) {
    out[i] = static_cast<std::uint8_t>((words[i / 8] >> (8 * (i % 8))) & 0xFF);
  }
  return out;
}

std::vector<std::uint8_t> encode_lfam(const LayerFamily& family) {
  std::vector<std::uint8_t> out(kLfamMagic, kLfamMagic + 8);
  put_u32(out, static_cast<std::uint32_t>(family.n()));
  put_u32(out, static_cast<std::uint32_t>(family.k()));
  const auto payload = lfam_payload(family);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

LayerFamily decode_lfam(std::span<const std::uint8_t> bytes, ExactCapacity cap) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kLfamMagic, 8) != 0) {
    throw ValidationError("not an LFAMv001 file (bad magic or truncated header)");
  }
  const std::uint32_t n = get_u32(bytes, 8);
  const std::uint32_t k = get_u32(bytes, 12);
  if (n > static_cast<std::uint32_t>(kMaxGround) || k > n) throw ValidationError("LFAM header has invalid n/k");
  LayerFamily f(static_cast<int>(n), static_cast<int>(k), cap);
  const std::size_t nbytes = (f.layer_size() + 7) / 8;
  if (bytes.size() != 16 + nbytes) {
    throw ValidationError("LFAM payload has " + std::to_string(bytes.size() - 16) + " bytes, expected " +
                          std::to_string(nbytes));
  }
  auto words = f.mutable_words();
  for (std::size_t i = 0; i < nbytes; ++i) {
    words[i / 8] |= static_cast<std::uint64_t>(bytes[16 + i]) << (8 * (i % 8));
  }
  if (const auto tail = f.layer_size() % 64; tail != 0 && (words.back() & ~low_bits(static_cast<int>(tail)))) {
    throw ValidationError("LFAM payload has bits set past C(n,k)");
  }
  return f;
}

LfamManifest make_manifest(const LayerFamily& family) {
  const auto payload = lfam_payload(family);
  return LfamManifest{family.n(), family.k(), family.count(), fnv1a64(payload)};
}

std::string manifest_json(const LfamManifest& m) {
  nlohmann::ordered_json j;
  j["format"] = "LFAMv001";
  j["n"] = m.n;
  j["k"] = m.k;
  j["popcount"] = m.popcount;
  j["fnv1a64"] = hex64(m.checksum);
  return j.dump(2) + "\n";
}

LfamManifest parse_manifest(const std::string& json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    LfamManifest m;
    m.n = j.at("n").get<int>();
    m.k = j.at("k").get<int>();
    m.popcount = j.at("popcount").get<std::uint64_t>();
    m.checksum = std::stoull(j.at("fnv1a64").get<std::string>(), nullptr, 16);
    return m;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("bad LFAM manifest: ") + e.what());
  }
}

std::filesystem::path manifest_path(const std::filesystem::path& lfam_path) {
  return std::filesystem::path(lfam_path.string() + ".json");
}

void write_lfam(const std::filesystem::path& path, const LayerFamily& family) {
  const auto bytes = encode_lfam(family);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  std::ofstream side(manifest_path(path), std::ios::trunc);
  if (!side) throw InputError("cannot open manifest for " + path.string());
  side << manifest_json(make_manifest(family));
}

LayerFamily read_lfam(const std::filesystem::path& path, ExactCapacity cap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open family file " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  LayerFamily f = decode_lfam(bytes, cap);
  const auto side = manifest_path(path);
  if (std::filesystem::exists(side)) {
    std::ifstream ms(side);
    std::stringstream buf;
    buf << ms.rdbuf();
    const LfamManifest m = parse_manifest(buf.str());
    const LfamManifest actual = make_manifest(f);
    if (m.n != actual.n || m.k != actual.k || m.popcount != actual.popcount || m.checksum != actual.checksum) {
      throw ValidationError("LFAM manifest does not match payload of " + path.string());
    }
  }
  return f;
}

}  // namespace itershadow
