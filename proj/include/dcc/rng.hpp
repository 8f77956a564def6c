#ifndef DCC_RNG_HPP
#define DCC_RNG_HPP

#include <cstdint>
#include <random>

namespace dcc {

using Rng = std::mt19937_64;

namespace detail {
// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used as the mixing
// function when deriving child streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Counter-based seed splitting. Every Monte Carlo task derives its stream
// from (master seed, index path), so results are independent of scheduling
// and worker count.
class RngKey {
 public:
  RngKey() : state_(0) {}
  static RngKey root(std::uint64_t seed) {
    RngKey k;
    k.state_ = detail::splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    return k;
  }

  RngKey child(std::uint64_t index) const {
    RngKey k;
    k.state_ = detail::splitmix64(state_ ^ detail::splitmix64(index + 1));
    return k;
  }

  Rng engine() const { return Rng(state_); }

  std::uint64_t raw() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace dcc

#endif  // DCC_RNG_HPP
