#ifndef DCC_PARALLEL_HPP
#define DCC_PARALLEL_HPP

#include <functional>

namespace dcc {

// Runs body(i) for i in [0, count). Work is distributed over `threads`
// workers (0 = hardware concurrency); each index must write only to its own
// slot of any shared output, so results are identical at any worker count.
// Nested calls from worker threads execute inline.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace dcc

#endif  // DCC_PARALLEL_HPP
