#pragma once

#include <cstddef>
#include <functional>

namespace aniso::parallel {

// Process-wide settings; the CLI sets them once before running experiments.
void set_threads(unsigned n);
unsigned threads();
void set_deterministic(bool on);
bool deterministic();

/// Runs fn(begin, end) over static contiguous chunks of [0, n).
void for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Sum of term(i) over [0, n). In deterministic mode the terms are formed in
/// parallel and added sequentially in index order, so the result does not
/// depend on the thread count. Otherwise each chunk is summed separately.
double sum(std::size_t n, const std::function<double(std::size_t)>& term);

}  // namespace aniso::parallel
