#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sepfix {

// Samples per reduction block. Block boundaries depend only on the sample
// count, never on the number of workers.
inline constexpr std::size_t kReductionBlock = 4096;

// SEPFIX_THREADS if set and positive, otherwise hardware concurrency.
std::size_t default_thread_count();

/// Evaluates body(begin, end) -> Acc for every fixed-size block of
/// [0, count) and returns the partial results in block order. Workers take
/// blocks round-robin; the caller folds the returned vector left to right,
/// so the final sum is the same for every thread count.
template <class Acc, class Body>
std::vector<Acc> map_blocks(std::size_t count, std::size_t threads, Body body) {
  const std::size_t nblocks = (count + kReductionBlock - 1) / kReductionBlock;
  std::vector<Acc> out(nblocks);
  auto work = [&](std::size_t worker, std::size_t nworkers) {
    for (std::size_t b = worker; b < nblocks; b += nworkers) {
      const std::size_t begin = b * kReductionBlock;
      out[b] = body(begin, std::min(count, begin + kReductionBlock));
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(nblocks, 1));
  if (threads == 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  auto guarded = [&](std::size_t worker) {
    try {
      work(worker, threads);
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(guarded, t);
  guarded(0);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace sepfix
