#include "wz/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace wz {

namespace {
std::atomic<int> g_threads{0};

int resolved_threads() {
    int n = g_threads.load(std::memory_order_relaxed);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}
}  // namespace

void set_worker_threads(int n) {
    g_threads.store(n, std::memory_order_relaxed);
}

int worker_threads() {
    return resolved_threads();
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    int threads = std::min(resolved_threads(), count);
    if (threads <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace wz
