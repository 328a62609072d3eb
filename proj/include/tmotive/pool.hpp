#ifndef TMOTIVE_POOL_HPP
#define TMOTIVE_POOL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace tmotive {

// Worker count: hardware concurrency, capped by TMOTIVE_THREADS when set.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TMOTIVE_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

/**
 * Runs the jobs on up to `workers` threads. Results keep job order; the first
 * exception (by job index) is rethrown after all workers finish.
 */
template <class R>
std::vector<R> run_ordered(const std::vector<std::function<R()>>& jobs, unsigned workers = worker_count()) {
    std::vector<R> out(jobs.size());
    std::vector<std::exception_ptr> errs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                out[i] = jobs[i]();
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace tmotive

#endif
