#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace mosaic {

using Key128 = std::array<std::uint64_t, 2>;

/// Philox4x64-10 block function.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter, Key128 key);

/// Canonical, prefix-free byte encoding used for stream keys. Every item
/// starts with a marker byte; variable-length payloads are length-prefixed
/// or terminated, so distinct item sequences give distinct byte strings.
template <class Sink>
class KeyEncoder {
public:
  static constexpr std::uint8_t kTagMarker = 0x74;
  static constexpr std::uint8_t kIntMarker = 0x69;
  static constexpr std::uint8_t kSetMarker = 0x73;
  static constexpr std::uint8_t kItemMarker = 0x01;
  static constexpr std::uint8_t kEndMarker = 0x00;

  Sink& tag(std::string_view name) {
    put(kTagMarker);
    varint(name.size());
    for (char ch : name) put(static_cast<std::uint8_t>(ch));
    return self();
  }

  Sink& u64(std::uint64_t value) {
    put(kIntMarker);
    varint(value);
    return self();
  }

  /// Sorted index set, written incrementally: begin_set, set_item..., end_set.
  Sink& begin_set() {
    put(kSetMarker);
    set_size_ = 0;
    return self();
  }
  Sink& set_item(std::uint64_t index) {
    put(kItemMarker);
    varint(index);
    ++set_size_;
    return self();
  }
  Sink& end_set() {
    put(kEndMarker);
    varint(set_size_);
    return self();
  }

  Sink& index_set(std::span<const std::uint64_t> sorted_indices) {
    begin_set();
    for (auto i : sorted_indices) set_item(i);
    return end_set();
  }

protected:
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      put(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    put(static_cast<std::uint8_t>(v));
  }

private:
  Sink& self() { return static_cast<Sink&>(*this); }
  void put(std::uint8_t byte) { self().put_byte(byte); }

  std::uint64_t set_size_ = 0;
};

/// Canonical byte sequence identifying a substream relative to its parent.
class StreamKey : public KeyEncoder<StreamKey> {
public:
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  void put_byte(std::uint8_t b) { bytes_.push_back(b); }

  friend bool operator==(const StreamKey&, const StreamKey&) = default;

private:
  std::vector<std::uint8_t> bytes_;
};

class Generator;

/// Streaming hash that maps (parent key, key bytes) to a child key. It accepts
/// exactly the encoding of StreamKey, so building a key incrementally here
/// yields the same substream as building a StreamKey and deriving from it.
class KeyAbsorber : public KeyEncoder<KeyAbsorber> {
public:
  explicit KeyAbsorber(const Generator& parent);
  explicit KeyAbsorber(Key128 chaining);

  void put_byte(std::uint8_t b);
  KeyAbsorber& absorb(std::span<const std::uint8_t> bytes);
  Generator finish() const;

private:
  void compress();

  Key128 state_;
  std::array<std::uint64_t, 4> block_{};
  std::size_t fill_ = 0;  // bytes in block_
  std::uint64_t length_ = 0;
};

/// Counter-based generator: output block k is philox4x64(k, key). Copies are
/// independent cursors over the same stream. Satisfies
/// UniformRandomBitGenerator so <random> distributions can draw from it.
class Generator {
public:
  using result_type = std::uint64_t;

  explicit Generator(Key128 key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open01() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  Generator derive(const StreamKey& key) const;
  Generator derive(std::string_view tag, std::uint64_t index) const;

  const Key128& key() const { return key_; }
  std::uint64_t blocks_consumed() const { return counter_; }

private:
  void refill();

  Key128 key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  std::size_t index_ = 4;
};

Generator make_root_generator(std::uint64_t seed);
Generator derive_substream(const Generator& g, const StreamKey& key);

}  // namespace mosaic
