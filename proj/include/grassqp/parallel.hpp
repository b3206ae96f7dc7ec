#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace grassqp {

// Applies fn to every index in [0, count) across hardware threads and
// returns results in index order, so the output is identical to a serial
// run regardless of scheduling.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, const std::function<Result(std::size_t)>& fn)
{
    std::vector<Result> out(count);
    unsigned workers = std::min<std::size_t>(std::thread::hardware_concurrency(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                out[i] = fn(i);
            }
        });
    for (auto& th : pool)
        th.join();
    return out;
}

} // namespace grassqp
