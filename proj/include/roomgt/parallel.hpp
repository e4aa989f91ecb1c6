#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace roomgt {

// Worker count: explicit request, else OR_THREADS, else the hardware count.
inline int resolve_threads(int requested = 0) {
  if (requested > 0) return requested;
  if (auto* env = std::getenv("OR_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1, int(std::thread::hardware_concurrency()));
}

// Calls func(i) for i in [0, count) on `threads` workers. Work items are
// claimed dynamically, so callers must write only to item-owned outputs.
template <typename Func>
inline void parallel_for(int count, int threads, Func&& func) {
  threads = std::max(1, std::min(threads, count));
  if (threads <= 1) {
    for (int i = 0; i < count; i++) func(i);
    return;
  }
  auto next      = std::atomic<int>{0};
  auto failure   = std::exception_ptr{};
  auto fail_lock = std::mutex{};
  auto workers   = std::vector<std::thread>{};
  for (int t = 0; t < threads; t++) {
    workers.emplace_back([&]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= count) break;
        try {
          func(i);
        } catch (...) {
          auto lock = std::lock_guard{fail_lock};
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

// Image-space variant over 16x16 tiles; func(x, y) per pixel.
template <typename Func>
inline void parallel_for_pixels(int width, int height, int threads, Func&& func) {
  constexpr int tile = 16;
  int tiles_x = (width + tile - 1) / tile, tiles_y = (height + tile - 1) / tile;
  parallel_for(tiles_x * tiles_y, threads, [&](int t) {
    int x0 = (t % tiles_x) * tile, y0 = (t / tiles_x) * tile;
    for (int y = y0; y < std::min(y0 + tile, height); y++)
      for (int x = x0; x < std::min(x0 + tile, width); x++) func(x, y);
  });
}

}  // namespace roomgt
