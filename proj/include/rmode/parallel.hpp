// parallel.hpp - OpenMP helpers with thread-count independent results
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

namespace rmode::parallel {

// Reductions are split into fixed-size chunks whose partial sums are combined
// in index order, so the result does not depend on the number of threads.
inline constexpr std::size_t reduction_chunk = 8192;

template <std::size_t K, class Term>
std::array<double, K> chunked_sums(std::size_t n, Term&& term) {
    const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
    std::vector<std::array<double, K>> partial(chunks);
    const auto count = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
        std::array<double, K> acc{};
        const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        for (std::size_t i = lo; i < hi; ++i) term(i, acc);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    std::array<double, K> total{};
    for (const auto& p : partial)
        for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
    return total;
}

template <class Term>
double chunked_sum(std::size_t n, Term&& term) {
    return chunked_sums<1>(n, [&](std::size_t i, std::array<double, 1>& acc) {
        acc[0] += term(i);
    })[0];
}

}  // namespace rmode::parallel
