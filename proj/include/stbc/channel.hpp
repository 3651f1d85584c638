#pragma once

#include <cstdint>

#include "stbc/numerics.hpp"

namespace stbc {

/// xoshiro256** keyed by (master seed, stream, index) through SplitMix64.
/// Substreams for different (stream, index) pairs are independent, so each
/// trial draws the same numbers no matter which thread runs it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform integer on [0, n).
  std::uint32_t below(std::uint32_t n);
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cplx complex_normal(double variance = 1.0);

 private:
  std::uint64_t s_[4];
};

/// Stream identifiers; channel, noise and data draws never share a stream.
enum class Stream : std::uint64_t { channel = 1, noise = 2, data = 3 };

struct ChannelRealization {
  CMat h;
  double n0 = 1.0;
};

/// n_r x n_t matrix of i.i.d. CN(0, 1) entries.
CMat sample_channel(int n_r, int n_t, Rng& rng);

/// N0 = n_t E_s / 10^(snr_db / 10).
double snr_to_n0(double snr_db, int n_t, double e_s);

/// Y = H X + N with N i.i.d. CN(0, N0). Throws DimensionMismatch.
CMat transmit(const CMat& x, const ChannelRealization& ch, Rng& noise_rng);

}  // namespace stbc
