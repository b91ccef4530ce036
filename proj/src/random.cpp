#include "mosaic/random.hpp"

namespace mosaic {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

// Fixed chaining value for root keys ("mosaic/root-iv" in ASCII, padded).
constexpr Key128 kRootIv{0x6d6f736169632f72ULL, 0x6f6f742d69760000ULL};

__extension__ using Wide = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const auto product = static_cast<Wide>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr, Key128 key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

KeyAbsorber::KeyAbsorber(const Generator& parent) : state_(parent.key()) {}

KeyAbsorber::KeyAbsorber(Key128 chaining) : state_(chaining) {}

void KeyAbsorber::put_byte(std::uint8_t b) {
  const std::size_t word = fill_ / 8;
  const std::size_t shift = (fill_ % 8) * 8;
  block_[word] |= static_cast<std::uint64_t>(b) << shift;
  ++fill_;
  ++length_;
  if (fill_ == 32) compress();
}

KeyAbsorber& KeyAbsorber::absorb(std::span<const std::uint8_t> bytes) {
  for (auto b : bytes) put_byte(b);
  return *this;
}

// Matyas-Meyer-Oseas style chaining with the Philox block function keyed by
// the running state, truncated to 128 bits.
void KeyAbsorber::compress() {
  const auto out = philox4x64(block_, state_);
  state_[0] ^= out[0] ^ block_[0] ^ block_[2];
  state_[1] ^= out[1] ^ block_[1] ^ block_[3];
  block_ = {};
  fill_ = 0;
}

Generator KeyAbsorber::finish() const {
  KeyAbsorber tail = *this;
  const std::uint64_t length = tail.length_;
  tail.put_byte(0x80);
  while (tail.fill_ != 24) tail.put_byte(0x00);
  // Last word carries the total message length.
  tail.block_[3] = length;
  tail.fill_ = 32;
  tail.compress();
  return Generator(tail.state_);
}

void Generator::refill() {
  buffer_ = philox4x64({counter_, 0, 0, 0}, key_);
  ++counter_;
  index_ = 0;
}

Generator Generator::derive(const StreamKey& key) const {
  return KeyAbsorber(*this).absorb(key.bytes()).finish();
}

Generator Generator::derive(std::string_view tag, std::uint64_t index) const {
  KeyAbsorber absorber(*this);
  absorber.tag(tag).u64(index);
  return absorber.finish();
}

Generator make_root_generator(std::uint64_t seed) {
  KeyAbsorber absorber(kRootIv);
  absorber.tag("root").u64(seed);
  return absorber.finish();
}

Generator derive_substream(const Generator& g, const StreamKey& key) { return g.derive(key); }

}  // namespace mosaic
