#include "dlamps/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace dlamps {

namespace {

constexpr char kMagic[4] = {'D', 'L', 'F', '1'};

void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32le(std::string& out, float v) {
  put_u32le(out, std::bit_cast<std::uint32_t>(v));
}

float get_f32le(const unsigned char* p) {
  return std::bit_cast<float>(get_u32le(p));
}

}  // namespace

void save_field_sequence(const std::vector<DisplacementField>& sequence,
                         const std::string& path) {
  if (sequence.empty()) {
    throw DataError("cannot save an empty field sequence");
  }
  for (std::size_t k = 1; k < sequence.size(); ++k) {
    if (!sequence[k].same_size(sequence[0])) {
      throw DimensionError("field frame " + std::to_string(k) +
                           " dimensions differ from frame 0");
    }
  }

  std::string bytes;
  const std::size_t plane = sequence[0].dx.size();
  bytes.reserve(sequence.size() * (12 + plane * 8));
  for (const DisplacementField& f : sequence) {
    bytes.append(kMagic, 4);
    put_u32le(bytes, static_cast<std::uint32_t>(f.width));
    put_u32le(bytes, static_cast<std::uint32_t>(f.height));
    for (float v : f.dx) put_f32le(bytes, v);
    for (float v : f.dy) put_f32le(bytes, v);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error("cannot write field file: " + path);
  }
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) {
    throw Error("write failed for field file: " + path);
  }
}

std::vector<DisplacementField> load_field_sequence(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw FormatError("cannot open field file: " + path);
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)),
                                   std::istreambuf_iterator<char>());
  if (bytes.empty()) {
    throw FormatError("malformed field file (empty): " + path);
  }

  std::vector<DisplacementField> sequence;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 12 || std::memcmp(bytes.data() + pos, kMagic, 4) != 0) {
      throw FormatError("malformed field header at byte " + std::to_string(pos) +
                        " in: " + path);
    }
    const std::uint32_t w = get_u32le(bytes.data() + pos + 4);
    const std::uint32_t h = get_u32le(bytes.data() + pos + 8);
    if (w < 1 || h < 1 || w > 1u << 20 || h > 1u << 20) {
      throw FormatError("malformed field header (bad dimensions) in: " + path);
    }
    pos += 12;
    const std::size_t plane = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos < plane * 8) {
      throw FormatError("malformed field file (truncated frame) in: " + path);
    }
    DisplacementField f(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < plane; ++i, pos += 4) f.dx[i] = get_f32le(bytes.data() + pos);
    for (std::size_t i = 0; i < plane; ++i, pos += 4) f.dy[i] = get_f32le(bytes.data() + pos);
    if (!sequence.empty() && !f.same_size(sequence[0])) {
      throw DimensionError("field frame " + std::to_string(sequence.size()) +
                           " dimensions differ from frame 0 in: " + path);
    }
    sequence.push_back(std::move(f));
  }
  return sequence;
}

}  // namespace dlamps
