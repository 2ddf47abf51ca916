#pragma once

#include <cstddef>
#include <functional>

namespace qfreg {

/// Worker count used by parallel loops. Defaults to the QFREG_THREADS
/// environment variable, else std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(chunk_index, begin, end) over [0, count) split into fixed-size
/// chunks. Chunk boundaries depend only on `count` and `chunk_size`, never on
/// the worker count, so callers that reduce per-chunk results in chunk order
/// get thread-count-invariant output.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) {
  return (count + chunk_size - 1) / chunk_size;
}

}  // namespace qfreg
