#include "aniso/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aniso::parallel {

namespace {
std::atomic<unsigned> g_threads{1};
std::atomic<bool> g_deterministic{true};
}  // namespace

void set_threads(unsigned n) { g_threads = std::max(1u, n); }
unsigned threads() { return g_threads; }
void set_deterministic(bool on) { g_deterministic = on; }
bool deterministic() { return g_deterministic; }

void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t t = std::min<std::size_t>(g_threads, std::max<std::size_t>(1, n / 64));
  if (t <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t c = 0; c < t; ++c) {
    const std::size_t b = c * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

double sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  if (g_deterministic || g_threads <= 1) {
    std::vector<double> terms(n);
    for_chunks(n, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) terms[i] = term(i);
    });
    double s = 0.0;
    for (double v : terms) s += v;
    return s;
  }
  std::mutex mu;
  double total = 0.0;
  for_chunks(n, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    std::lock_guard<std::mutex> lock(mu);
    total += s;
  });
  return total;
}

}  // namespace aniso::parallel
