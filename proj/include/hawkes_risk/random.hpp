#ifndef HAWKES_RISK_RANDOM_HPP_
#define HAWKES_RISK_RANDOM_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace hawkes_risk {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128 bits.
namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr Counter round(const Counter &ctr, const Key &key) {
  const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(p0)};
}

constexpr Counter block(Counter ctr, Key key) {
  ctr = round(ctr, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    ctr = round(ctr, key);
  }
  return ctr;
}

}  // namespace philox

// Which random quantity a substream feeds. Arrival times and marks of one path
// draw from different substreams so that N(t) and X_k are independent.
enum class StreamRole : std::uint32_t {
  kArrivals = 0,
  kMarks = 1,
  kDiffusion = 2,
};

// Identifies a substream: (master seed, path index, role). Distinct triples
// map to distinct Philox (key, counter-prefix) pairs, so substreams never
// overlap no matter how replications are scheduled across workers.
struct StreamId {
  std::uint64_t master = 0;
  std::uint64_t path = 0;
  StreamRole role = StreamRole::kArrivals;
};

// Counter-based 64-bit engine satisfying UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(StreamId id)
      : key_{static_cast<std::uint32_t>(id.master),
             static_cast<std::uint32_t>(id.master >> 32)} {
    // Upper 64 counter bits: path index in the high 62 bits, role in the low 2.
    const std::uint64_t stream =
        (id.path << 2) | (static_cast<std::uint64_t>(id.role) & 0x3u);
    ctr_[2] = static_cast<std::uint32_t>(stream);
    ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
  }

  explicit CounterRng(std::uint64_t seed) : CounterRng(StreamId{seed, 0, StreamRole::kArrivals}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (cursor_ == 2) refill();
    return buffer_[cursor_++];
  }

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exp(1) variate; strictly positive.
  double standard_exponential() { return -std::log(uniform()); }

 private:
  void refill() {
    const philox::Counter out = philox::block(ctr_, key_);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    cursor_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  philox::Key key_;
  philox::Counter ctr_{0, 0, 0, 0};
  std::array<std::uint64_t, 2> buffer_{};
  int cursor_ = 2;
};

}  // namespace hawkes_risk

#endif  // HAWKES_RISK_RANDOM_HPP_
