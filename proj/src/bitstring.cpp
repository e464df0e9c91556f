#include "certlearn/bitstring.hpp"

#include <bit>

#include "certlearn/errors.hpp"

namespace certlearn {

namespace {

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

BitString::BitString(std::size_t size, bool value)
    : words_(words_for(size), value ? ~std::uint64_t{0} : 0), size_(size) {
  if (value && (size_ & 63) != 0) {
    words_.back() &= ~std::uint64_t{0} << (64 - (size_ & 63));
  }
}

BitString BitString::from_string(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set(i, true);
    } else if (bits[i] != '0') {
      throw ParseError("bit string contains a character other than 0/1");
    }
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  BitString out;
  out.append_uint(value, width);
  return out;
}

bool BitString::at(std::size_t i) const {
  if (i >= size_) throw ShapeError("bit index out of range");
  return (*this)[i];
}

void BitString::set(std::size_t i, bool value) {
  if (i >= size_) throw ShapeError("bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitString::flip(std::size_t i) {
  if (i >= size_) throw ShapeError("bit index out of range");
  words_[i >> 6] ^= std::uint64_t{1} << (63 - (i & 63));
}

void BitString::push_back(bool bit) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  if (bit) words_.back() |= std::uint64_t{1} << (63 - ((size_ - 1) & 63));
}

BitString& BitString::append_uint(std::uint64_t value, std::size_t width) {
  if (width > 64) throw ShapeError("append_uint width exceeds 64");
  if (width < 64 && (value >> width) != 0) {
    throw ShapeError("value does not fit in the requested width");
  }
  if (width == 0) return *this;
  const std::size_t offset = size_ & 63;
  const std::uint64_t aligned = value << (64 - width);  // MSB-aligned
  if (offset == 0) {
    words_.push_back(aligned);
  } else {
    words_.back() |= aligned >> offset;
    if (offset + width > 64) words_.push_back(aligned << (64 - offset));
  }
  size_ += width;
  return *this;
}

BitString& BitString::append(const BitString& other) {
  std::size_t remaining = other.size_;
  for (std::size_t w = 0; remaining > 0; ++w) {
    const std::size_t take = remaining < 64 ? remaining : 64;
    append_uint(other.words_[w] >> (64 - take), take);
    remaining -= take;
  }
  return *this;
}

std::uint64_t BitString::read_uint(std::size_t pos, std::size_t width) const {
  if (width > 64 || pos + width > size_) {
    throw ShapeError("read_uint range out of bounds");
  }
  if (width == 0) return 0;
  const std::size_t word = pos >> 6;
  const std::size_t offset = pos & 63;
  std::uint64_t hi = words_[word] << offset;
  if (offset + width > 64) hi |= words_[word + 1] >> (64 - offset);
  return hi >> (64 - width);
}

std::uint64_t BitString::to_uint() const {
  if (size_ > 64) throw ShapeError("bit string longer than 64 bits");
  return read_uint(0, size_);
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > size_) throw ShapeError("slice out of bounds");
  BitString out;
  out.words_.reserve(words_for(len));
  while (len > 0) {
    const std::size_t take = len < 64 ? len : 64;
    out.append_uint(read_uint(pos, take), take);
    pos += take;
    len -= take;
  }
  return out;
}

std::size_t BitString::popcount() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitString::is_zero() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

BitString BitString::operator^(const BitString& other) const {
  if (other.size_ != size_) throw ShapeError("xor of unequal lengths");
  BitString out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] ^= other.words_[i];
  return out;
}

std::string BitString::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nibbles = (size_ + 3) / 4;
  const std::size_t pad = nibbles * 4 - size_;
  std::string out;
  out.reserve(nibbles);
  unsigned acc = 0;
  std::size_t filled = pad;
  for (std::size_t i = 0; i < size_; ++i) {
    acc = (acc << 1) | ((*this)[i] ? 1U : 0U);
    if (++filled == 4) {
      out.push_back(kDigits[acc]);
      acc = 0;
      filled = 0;
    }
  }
  return out;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
  }
  return std::strong_ordering::equal;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw ShapeError("hamming distance of unequal lengths");
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(a.words()[i] ^ b.words()[i]));
  }
  return total;
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

std::uint64_t lex_rank(const BitString& w) { return w.to_uint() + 1; }

BitString string_of_rank(std::uint64_t rank, std::size_t width) {
  if (rank == 0) throw ShapeError("ranks are 1-indexed");
  if (width < 64 && rank > (std::uint64_t{1} << width)) {
    throw ShapeError("rank exceeds 2^width");
  }
  return BitString::from_uint(rank - 1, width);
}

std::size_t BitStringHash::operator()(const BitString& s) const noexcept {
  std::size_t h = std::hash<std::size_t>{}(s.size());
  for (auto w : s.words()) {
    h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace certlearn
