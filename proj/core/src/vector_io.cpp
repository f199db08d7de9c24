#include "dotcall64/vector_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dotcall64/error.hpp"

namespace dc64 {
namespace {

constexpr bool kLittleEndian = std::endian::native == std::endian::little;

void swap_elements(char* bytes, std::size_t count, std::size_t width) {
  for (std::size_t i = 0; i < count; ++i) {
    std::reverse(bytes + i * width, bytes + (i + 1) * width);
  }
}

void put_u64(char* dst, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) dst[i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64(const char* src) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(src[i])) << (8 * i);
  }
  return v;
}

// Streams large buffers in bounded blocks so a byte swap (big-endian hosts)
// never needs a full-size scratch copy.
constexpr std::size_t kBlockBytes = std::size_t{1} << 20;

}  // namespace

void write_dc64(std::ostream& out, const TypedVector& v) {
  if (v.elem_type() == ElemType::Int64) {
    throw SpecError("int64 vectors have no DC64 encoding");
  }
  char header[kDc64HeaderSize];
  std::memcpy(header, kDc64Magic, 4);
  header[4] = static_cast<char>(kDc64Version);
  header[5] = static_cast<char>(v.elem_type());
  put_u64(header + 6, v.length());
  out.write(header, sizeof header);

  const auto* bytes = static_cast<const char*>(v.data());
  const std::size_t total = v.byte_size();
  const std::size_t width = element_size(v.elem_type());
  if constexpr (kLittleEndian) {
    out.write(bytes, static_cast<std::streamsize>(total));
  } else {
    std::vector<char> block;
    for (std::size_t off = 0; off < total; off += kBlockBytes) {
      const std::size_t n = std::min(kBlockBytes, total - off);
      block.assign(bytes + off, bytes + off + n);
      swap_elements(block.data(), n / width, width);
      out.write(block.data(), static_cast<std::streamsize>(n));
    }
  }
  if (!out) throw SpecError("failed to write DC64 stream");
}

void write_dc64(const std::filesystem::path& path, const TypedVector& v) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SpecError("cannot open " + path.string() + " for writing");
  write_dc64(out, v);
}

TypedVector read_dc64(std::istream& in, std::uint64_t long_threshold) {
  char header[kDc64HeaderSize];
  if (!in.read(header, sizeof header)) {
    throw SpecError("truncated DC64 header");
  }
  if (std::memcmp(header, kDc64Magic, 4) != 0) {
    throw SpecError("bad DC64 magic");
  }
  if (static_cast<std::uint8_t>(header[4]) != kDc64Version) {
    throw SpecError("unsupported DC64 version " +
                    std::to_string(static_cast<unsigned char>(header[4])));
  }
  const auto tag = static_cast<std::uint8_t>(header[5]);
  if (tag > 1) {
    throw SpecError("unknown DC64 element type " + std::to_string(tag));
  }
  const auto type = static_cast<ElemType>(tag);
  const std::uint64_t length = get_u64(header + 6);

  auto v = new_vector(type, length, false, long_threshold);
  if (!in.read(static_cast<char*>(v.data()),
               static_cast<std::streamsize>(v.byte_size()))) {
    throw SpecError("truncated DC64 payload: expected " +
                    std::to_string(length) + " elements");
  }
  if constexpr (!kLittleEndian) {
    swap_elements(static_cast<char*>(v.data()), length, element_size(type));
  }
  return v;
}

TypedVector read_dc64(const std::filesystem::path& path,
                      std::uint64_t long_threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path.string());
  auto v = read_dc64(in, long_threshold);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw SpecError(path.string() + ": trailing bytes after DC64 payload");
  }
  return v;
}

}  // namespace dc64
