#ifndef TORUS_PARALLEL_H_
#define TORUS_PARALLEL_H_

#include <functional>

namespace torus {

// Number of worker threads used by ParallelFor. Reads TORUS_SOLVER_THREADS
// (a cap) and falls back to the hardware concurrency.
int WorkerThreads();

// Runs body(i) for i in [0, count). Indices are split into contiguous static
// chunks, one per thread; body must only write to slots owned by index i.
// Results are therefore independent of the thread count.
void ParallelFor(int count, const std::function<void(int)>& body);

}  // namespace torus

#endif  // TORUS_PARALLEL_H_
