#include "stbc/channel.hpp"

#include <cmath>
#include <numbers>

#include "stbc/error.hpp"

namespace stbc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t x = master_seed;
  std::uint64_t k = splitmix64(x);
  x = k ^ (stream * 0xD1B54A32D192ED03ull);
  k = splitmix64(x);
  x = k ^ (index * 0x8CB92BA72F3D8DD7ull);
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint32_t Rng::below(std::uint32_t n) {
  // Lemire's multiply-shift; the bias is < 2^-32 for the small n used here.
  return static_cast<std::uint32_t>(((next() >> 32) * static_cast<std::uint64_t>(n)) >> 32);
}

cplx Rng::complex_normal(double variance) {
  // Box-Muller: |z|^2 ~ Exp(variance), uniform phase.
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-variance * std::log(u1));
  return std::polar(r, 2.0 * std::numbers::pi * u2);
}

CMat sample_channel(int n_r, int n_t, Rng& rng) {
  CMat h(static_cast<std::size_t>(n_r), static_cast<std::size_t>(n_t));
  for (auto& v : h.data()) v = rng.complex_normal(1.0);
  return h;
}

double snr_to_n0(double snr_db, int n_t, double e_s) {
  if (!(e_s > 0)) throw Error(ErrorKind::OutOfRange, "snr_to_n0: E_s must be positive");
  return n_t * e_s / std::pow(10.0, snr_db / 10.0);
}

CMat transmit(const CMat& x, const ChannelRealization& ch, Rng& noise_rng) {
  if (ch.h.cols() != x.rows())
    throw Error(ErrorKind::DimensionMismatch, "transmit: H columns != X rows");
  CMat y = ch.h * x;
  if (ch.n0 > 0)
    for (auto& v : y.data()) v += noise_rng.complex_normal(ch.n0);
  return y;
}

}  // namespace stbc
