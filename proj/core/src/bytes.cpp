#include "laocoon/bytes.hpp"

namespace laocoon {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

ByteWriter& ByteWriter::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::raw(ByteView v) {
  out_.insert(out_.end(), v.begin(), v.end());
  return *this;
}

ByteWriter& ByteWriter::blob(ByteView v) {
  if (v.size() > 0xffffffffu) throw std::length_error("blob too large");
  u32(static_cast<std::uint32_t>(v.size()));
  return raw(v);
}

ByteWriter& ByteWriter::str(std::string_view v) {
  if (v.size() > 0xffffu) throw std::length_error("string too large");
  out_.push_back(static_cast<std::uint8_t>(v.size() >> 8));
  out_.push_back(static_cast<std::uint8_t>(v.size()));
  return raw(as_bytes(v));
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
  auto b = raw(4);
  std::uint32_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t ByteReader::u64() {
  auto b = raw(8);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

ByteView ByteReader::raw(std::size_t n) {
  if (n > remaining()) throw DecodeError("truncated input");
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView ByteReader::blob(std::size_t max_len) {
  auto n = u32();
  if (n > max_len) throw DecodeError("length prefix exceeds limit");
  return raw(n);
}

std::string ByteReader::str() {
  auto len = raw(2);
  std::size_t n = (std::size_t{len[0]} << 8) | len[1];
  auto b = raw(n);
  return {b.begin(), b.end()};
}

void ByteReader::expect_done() const {
  if (!done()) throw DecodeError("trailing bytes after encoding");
}

}  // namespace laocoon
