#include "sepfix/sampling.hpp"

#include "sepfix/errors.hpp"
#include "sepfix/parallel.hpp"

#include <cstdlib>
#include <random>
#include <string>

namespace sepfix {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::size_t default_thread_count() {
  if (const char* env = std::getenv("SEPFIX_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return mix64(mix64(seed + kGolden) ^ mix64(salt * 0xD1B54A32D192ED03ULL + 1));
}

StreamRng::StreamRng(SeedStream s) : state_(derive_seed(s.seed, s.stream_id)) {}

StreamRng::result_type StreamRng::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

UnitVector haar_unit_vector(std::size_t n, StreamRng& rng) {
  if (n == 0) throw DomainError("haar_unit_vector: dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = cplx(re, im);
  }
  // A zero draw has probability zero; the normalization would reject it.
  return UnitVector::normalized(v);
}

UnitVector haar_unit_vector(std::size_t n, SeedStream stream) {
  StreamRng rng(stream);
  return haar_unit_vector(n, rng);
}

ProductSample torus_sample(Dims dims, SeedStream stream) {
  if (dims.a == 0 || dims.b == 0) throw DomainError("torus_sample: zero dimension");
  StreamRng rng(stream);
  UnitVector phi = haar_unit_vector(dims.a, rng);
  UnitVector phi_prime = haar_unit_vector(dims.b, rng);
  return {std::move(phi), std::move(phi_prime)};
}

SampleSet::SampleSet(std::uint64_t seed, Dims dims, std::vector<ProductSample> samples)
    : seed_(seed), dims_(dims), samples_(std::move(samples)) {
  if (samples_.empty()) throw DomainError("SampleSet: count must be >= 1");
  const std::size_t d = dims_.total();
  product_.resize(samples_.size() * d);
  for (std::size_t s = 0; s < samples_.size(); ++s) {
    const Vector& a = samples_[s].phi.amplitudes();
    const Vector& b = samples_[s].phi_prime.amplitudes();
    if (static_cast<std::size_t>(a.size()) != dims_.a ||
        static_cast<std::size_t>(b.size()) != dims_.b) {
      throw DimensionError("SampleSet: sample " + std::to_string(s) + " has wrong dimensions");
    }
    cplx* row = product_.data() + s * d;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      for (Eigen::Index j = 0; j < b.size(); ++j) *row++ = a(i) * b(j);
  }
}

std::vector<ProductSample> make_sample_range(std::uint64_t seed, Dims dims, std::size_t begin,
                                             std::size_t end) {
  std::vector<ProductSample> out;
  out.reserve(end > begin ? end - begin : 0);
  for (std::size_t i = begin; i < end; ++i) out.push_back(torus_sample(dims, {seed, i}));
  return out;
}

SampleSet make_sample_set(std::uint64_t seed, std::size_t count, Dims dims, std::size_t threads) {
  if (count == 0) throw DomainError("make_sample_set: count must be >= 1");
  auto blocks = map_blocks<std::vector<ProductSample>>(
      count, threads,
      [&](std::size_t begin, std::size_t end) { return make_sample_range(seed, dims, begin, end); });
  std::vector<ProductSample> all;
  all.reserve(count);
  for (auto& b : blocks)
    for (auto& s : b) all.push_back(std::move(s));
  return SampleSet(seed, dims, std::move(all));
}

}  // namespace sepfix
