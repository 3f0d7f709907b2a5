#include "tensorfree/budget.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tf {

namespace {
std::atomic<double> g_budget{-1};
std::atomic<unsigned> g_threads{0};
}  // namespace

double budget() {
    double b = g_budget.load();
    if (b < 0) {
        b = 2e8;
        if (const char* e = std::getenv("TENSORFREE_BUDGET")) b = std::atof(e);
        g_budget = b;
    }
    return b;
}

void set_budget(double b) { g_budget = b; }

void require_budget(double work, const std::string& what) {
    if (work > budget()) throw BudgetExceeded(what + ": work estimate exceeds budget");
}

unsigned thread_count() {
    unsigned t = g_threads.load();
    if (t == 0) {
        if (const char* e = std::getenv("TENSORFREE_THREADS")) t = unsigned(std::atoi(e));
        if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
        g_threads = t;
    }
    return t;
}

void set_thread_count(unsigned t) { g_threads = t; }

void parallel_ranges(size_t count, const std::function<void(size_t, size_t, unsigned)>& body) {
    unsigned t = unsigned(std::min<size_t>(thread_count(), count));
    if (t <= 1) {
        if (count) body(0, count, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    for (unsigned w = 0; w < t; ++w) {
        size_t lo = count * w / t, hi = count * (w + 1) / t;
        pool.emplace_back([&, lo, hi, w] {
            try {
                body(lo, hi, w);
            } catch (...) {
                std::lock_guard<std::mutex> g(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace tf
