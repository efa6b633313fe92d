#include "loewner/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace loewner {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng::CounterRng(RngSeed s) noexcept
    : key_(mix64(mix64(s.seed + kGolden) ^ mix64(s.stream + 0x1234567897531ULL))) {}

std::uint64_t CounterRng::u64_at(std::uint64_t index) const noexcept {
  return mix64(key_ + index * kGolden);
}

std::uint64_t CounterRng::next_u64() noexcept { return u64_at(counter_++); }

double CounterRng::double_at(std::uint64_t index) const noexcept {
  return static_cast<double>(u64_at(index) >> 11) * 0x1.0p-53;
}

double CounterRng::next_double() noexcept { return double_at(counter_++); }

double CounterRng::next_uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * next_double();
}

double CounterRng::normal_at(std::uint64_t index) const noexcept {
  // Box-Muller on the fixed pair of raw outputs (2*index, 2*index + 1).
  const double u1 = double_at(2 * index);
  const double u2 = double_at(2 * index + 1);
  const double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0));  // log(1-u1), never log(0)
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

double CounterRng::next_normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0));
  const double a = 6.283185307179586476925286766559 * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

std::uint64_t CounterRng::next_poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  // Split large means so the product-of-uniforms loop never underflows.
  if (mean > 30.0) {
    const double half = std::floor(mean / 2.0);
    return next_poisson(half) + next_poisson(mean - half);
  }
  const double limit = std::exp(-mean);
  std::uint64_t n = 0;
  double prod = next_double();
  while (prod > limit) {
    ++n;
    prod *= next_double();
  }
  return n;
}

CounterRng CounterRng::fork(std::uint64_t tag) const noexcept {
  CounterRng child(RngSeed{key_, mix64(tag + 0x5bf03635ULL)});
  return child;
}

}  // namespace loewner
