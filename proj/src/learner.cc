#include "easyfirst/learner.h"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "easyfirst/util.h"

namespace easyfirst {
namespace {

constexpr std::size_t kChunk = 1 << 16;

std::uint32_t ToLittle(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
  }
}

void WriteArray(std::ostream& out, std::span<const float> values) {
  std::vector<std::uint32_t> buf;
  for (std::size_t off = 0; off < values.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, values.size() - off);
    buf.resize(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = ToLittle(std::bit_cast<std::uint32_t>(values[off + i]));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
  }
  if (!out) throw IoError("error writing weight array");
}

void ReadArray(std::istream& in, std::span<float> values) {
  std::vector<std::uint32_t> buf;
  for (std::size_t off = 0; off < values.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, values.size() - off);
    buf.resize(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
    if (!in) throw IoError("truncated weight array");
    for (std::size_t i = 0; i < n; ++i) values[off + i] = std::bit_cast<float>(ToLittle(buf[i]));
  }
}

}  // namespace

void WriteWeightArrays(std::ostream& out, const WeightStore& store, bool with_accumulators) {
  WriteArray(out, store.weights());
  if (with_accumulators) WriteArray(out, store.gradsq());
}

void ReadWeightArrays(std::istream& in, WeightStore& store, bool with_accumulators) {
  ReadArray(in, store.weights());
  if (with_accumulators) ReadArray(in, store.gradsq());
}

}  // namespace easyfirst
