#pragma once

// Bit-level message assembly. A BitString is an MSB-first sequence of bits;
// fixed-width fields are appended most significant bit first so a reader that
// knows the field widths can parse the stream without separators.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace exactn {

using BitString = std::vector<bool>;

inline void append_bit(BitString& bits, bool b) { bits.push_back(b); }

// Appends exactly `width` bits of `value`, most significant first.
inline void append_field(BitString& bits, std::uint64_t value, unsigned width) {
  if (width > 64) throw std::invalid_argument("append_field: width exceeds 64");
  if (width < 64 && (value >> width) != 0)
    throw std::invalid_argument("append_field: value does not fit in field");
  for (unsigned i = width; i-- > 0;) bits.push_back(((value >> i) & 1u) != 0);
}

inline std::string to_string(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

// Sequential reader. Reading past the end throws, so callers can treat
// truncated input as malformed instead of consuming garbage.
class BitReader {
 public:
  explicit BitReader(const BitString& bits) : bits_(&bits) {}

  bool read_bit() {
    if (pos_ >= bits_->size())
      throw std::invalid_argument("bit reader: read past end of message");
    return (*bits_)[pos_++];
  }

  std::uint64_t read_field(unsigned width) {
    if (width > 64) throw std::invalid_argument("bit reader: width exceeds 64");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
    return v;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_->size() - pos_; }

 private:
  const BitString* bits_;
  std::size_t pos_ = 0;
};

}  // namespace exactn
