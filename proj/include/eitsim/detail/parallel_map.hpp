#pragma once

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

namespace eitsim {

template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn, std::size_t threads)
{
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t w = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (w == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < w; ++k)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace eitsim
