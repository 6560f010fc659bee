#pragma once

#include "sepfix/operator.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sepfix {

struct SeedStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Counter-seeded SplitMix64 generator. Each (seed, stream_id) pair starts
/// at its own well-mixed state, so sample i can be produced without
/// touching samples 0..i-1.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(SeedStream s);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t state_;
};

// Mixes two words into one; used to derive child seeds (per step, per term).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

struct ProductSample {
  UnitVector phi;
  UnitVector phi_prime;
};

// Haar-uniform unit vector: n iid standard complex Gaussians, normalized.
UnitVector haar_unit_vector(std::size_t n, SeedStream stream);
UnitVector haar_unit_vector(std::size_t n, StreamRng& rng);

// Independent Haar factors on the torus, both drawn from one stream.
ProductSample torus_sample(Dims dims, SeedStream stream);

/// Deterministic Monte Carlo sample of the torus. Sample i is drawn from
/// stream (seed, i), so any partition of the index range reproduces the
/// same set. The composite vectors phi (x) phi' are cached row by row.
class SampleSet {
 public:
  SampleSet(std::uint64_t seed, Dims dims, std::vector<ProductSample> samples);

  std::uint64_t seed() const { return seed_; }
  Dims dims() const { return dims_; }
  std::size_t count() const { return samples_.size(); }
  const ProductSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<ProductSample>& samples() const { return samples_; }

  // Amplitudes of phi_i (x) phi'_i, length dims.total().
  std::span<const cplx> product(std::size_t i) const {
    const std::size_t d = dims_.total();
    return {product_.data() + i * d, d};
  }

 private:
  std::uint64_t seed_;
  Dims dims_;
  std::vector<ProductSample> samples_;
  std::vector<cplx> product_;
};

// Samples with indices in [begin, end).
std::vector<ProductSample> make_sample_range(std::uint64_t seed, Dims dims, std::size_t begin,
                                             std::size_t end);

// threads = 0 picks default_thread_count(). The result does not depend on it.
SampleSet make_sample_set(std::uint64_t seed, std::size_t count, Dims dims,
                          std::size_t threads = 0);

}  // namespace sepfix
