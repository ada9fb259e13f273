#pragma once

#include <cstdint>
#include <functional>

namespace momdec {

/// Run body(i) for i in [begin, end) across worker threads. Each index must
/// touch only its own output slot; results are then independent of the
/// thread count. threads == 0 picks the hardware concurrency.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& body, unsigned threads = 0);

}  // namespace momdec
