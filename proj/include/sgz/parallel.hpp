#pragma once

#include <cstddef>
#include <functional>

namespace sgz {

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `threads` workers (0 means hardware concurrency). Chunk boundaries depend
/// only on count and chunk, never on the thread count. The first exception
/// thrown by any chunk is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t chunk, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Worker count actually used for a request of `threads`.
unsigned resolve_threads(unsigned threads);

}  // namespace sgz
