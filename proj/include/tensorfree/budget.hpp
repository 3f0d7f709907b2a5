#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace tf {

// Raised when an exhaustive scan would exceed the configured work budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Work budget in elementary steps, read once from TENSORFREE_BUDGET
// (default 2e8).  set_budget overrides it, e.g. from the CLI.
double budget();
void set_budget(double b);
void require_budget(double work, const std::string& what);

// worker threads for parallel scans (TENSORFREE_THREADS or hardware)
unsigned thread_count();
void set_thread_count(unsigned t);

// Splits [0, count) into contiguous chunks, one per worker.  body(lo, hi, w)
// runs on worker w; exceptions are rethrown on the caller.
void parallel_ranges(size_t count, const std::function<void(size_t, size_t, unsigned)>& body);

}  // namespace tf
