#include "majdyn/simd/kernels.hpp"

#include <bit>

namespace majdyn::simd {
namespace {

std::uint64_t popcount_scalar(std::span<const std::uint64_t> words) {
    std::uint64_t total = 0;
    for (std::uint64_t w : words) {
        total += static_cast<std::uint64_t>(std::popcount(w));
    }
    return total;
}

std::uint64_t hamming_scalar(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
    }
    return total;
}

inline std::uint32_t count_set(const std::uint32_t* first, const std::uint32_t* last,
                               const std::uint64_t* bits) {
    std::uint32_t count = 0;
    for (; first != last; ++first) {
        const std::uint32_t u = *first;
        count += static_cast<std::uint32_t>((bits[u >> 6] >> (u & 63)) & 1U);
    }
    return count;
}

void positive_neighbor_counts_scalar(const CsrView& g, const std::uint64_t* bits, std::uint32_t* out) {
    for (std::size_t v = 0; v < g.n; ++v) {
        out[v] = count_set(g.neighbors + g.offsets[v], g.neighbors + g.offsets[v + 1], bits);
    }
}

void majority_update_scalar(const CsrView& g, const std::uint64_t* in, std::uint64_t* out) {
    const std::size_t words = (g.n + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        const std::size_t first = w * 64;
        const std::size_t last = first + 64 < g.n ? first + 64 : g.n;
        std::uint64_t word = 0;
        for (std::size_t v = first; v < last; ++v) {
            const std::uint64_t deg = g.offsets[v + 1] - g.offsets[v];
            const std::uint64_t pos =
                count_set(g.neighbors + g.offsets[v], g.neighbors + g.offsets[v + 1], in);
            std::uint64_t bit;
            if (2 * pos > deg) {
                bit = 1;
            } else if (2 * pos < deg) {
                bit = 0;
            } else {
                bit = (in[w] >> (v - first)) & 1U;
            }
            word |= bit << (v - first);
        }
        out[w] = word;
    }
}

constexpr KernelTable kScalar{
    Level::Scalar,
    &popcount_scalar,
    &hamming_scalar,
    &positive_neighbor_counts_scalar,
    &majority_update_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace majdyn::simd
