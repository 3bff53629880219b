#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., Random123) and the
// chunked stream layout used by the Monte Carlo estimators. A sample chunk is
// a pure function of (seed, chunk index), so results do not depend on how
// chunks are distributed across worker threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

namespace simplexvol::rng {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Sequential draws within one chunk: counter = (draw_lo, draw_hi, chunk_lo, chunk_hi).
class ChunkStream {
 public:
  ChunkStream(std::uint64_t seed, std::uint64_t chunk)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, chunk_(chunk) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    if (pos_ == 2) refill();
    const std::uint64_t bits = words_[pos_++];
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the pair's second value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  void refill() {
    const Philox4x32::Block out = Philox4x32::generate(
        {static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32),
         static_cast<std::uint32_t>(chunk_), static_cast<std::uint32_t>(chunk_ >> 32)},
        key_);
    ++draw_;
    words_[0] = (std::uint64_t{out[0]} << 32) | out[1];
    words_[1] = (std::uint64_t{out[2]} << 32) | out[3];
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t chunk_;
  std::uint64_t draw_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int pos_ = 2;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline constexpr std::uint64_t kChunkSize = 1u << 15;

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * @brief Runs `body(chunk_index, chunk_samples)` for every chunk and returns the
 * per-chunk results in chunk order. Worker w handles chunks w, w+W, ...
 */
template <class Result, class Body>
std::vector<Result> for_each_chunk(std::uint64_t samples, unsigned workers, Body body) {
  const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<Result> out(chunks);
  auto run = [&](unsigned w, unsigned stride) {
    for (std::uint64_t c = w; c < chunks; c += stride) {
      const std::uint64_t begin = c * kChunkSize;
      out[c] = body(c, std::min(kChunkSize, samples - begin));
    }
  };
  const unsigned nw = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(chunks, 1)));
  if (nw <= 1) {
    run(0, 1);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(nw);
  for (unsigned w = 0; w < nw; ++w) pool.emplace_back(run, w, nw);
  pool.clear();
  return out;
}

}  // namespace simplexvol::rng
