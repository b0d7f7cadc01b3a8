#include "wavkan/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace wavkan {

std::size_t default_workers() {
    if (const char* env = std::getenv("WAVKAN_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<std::size_t>(n);
        } catch (...) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t num_tasks, const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t workers) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, num_tasks));
    if (workers == 1) {
        for (std::size_t t = 0; t < num_tasks; ++t) fn(t, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < num_tasks; t += workers) fn(t, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace wavkan
