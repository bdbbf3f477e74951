// Compiled with -mavx2 -mpopcnt on x86-64; only reached after a runtime
// CPU check in dispatch.cpp.

#include "majdyn/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

namespace majdyn::simd {
namespace {

inline __m256i popcount_bytes(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline std::uint64_t horizontal_sum(__m256i acc) {
    return static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 0)) +
           static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 1)) +
           static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 2)) +
           static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 3));
}

std::uint64_t popcount_avx2(std::span<const std::uint64_t> words) {
    const std::size_t n = words.size();
    const std::uint64_t* data = words.data();
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()));
    }
    std::uint64_t total = horizontal_sum(acc);
    for (; i < n; ++i) {
        total += static_cast<std::uint64_t>(_mm_popcnt_u64(data[i]));
    }
    return total;
}

std::uint64_t hamming_avx2(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    const std::size_t n = a.size();
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        acc = _mm256_add_epi64(
            acc, _mm256_sad_epu8(popcount_bytes(_mm256_xor_si256(x, y)), _mm256_setzero_si256()));
    }
    std::uint64_t total = horizontal_sum(acc);
    for (; i < n; ++i) {
        total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] ^ b[i]));
    }
    return total;
}

// Gathers the opinion bits of eight neighbors at a time from the bit array
// viewed as 32-bit words, moves each bit to the lane sign position and
// counts them with movemask + popcnt.
inline std::uint32_t count_set(const std::uint32_t* first, std::size_t len, const int* words32) {
    const __m256i low5 = _mm256_set1_epi32(31);
    std::uint32_t count = 0;
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        const __m256i idx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(first + i));
        const __m256i w = _mm256_i32gather_epi32(words32, _mm256_srli_epi32(idx, 5), 4);
        const __m256i shifted = _mm256_sllv_epi32(w, _mm256_sub_epi32(low5, _mm256_and_si256(idx, low5)));
        count += static_cast<std::uint32_t>(_mm_popcnt_u32(
            static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(shifted)))));
    }
    const std::size_t rem = len - i;
    if (rem != 0) {
        const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
        const __m256i mask = _mm256_cmpgt_epi32(_mm256_set1_epi32(static_cast<int>(rem)), lane);
        const __m256i idx = _mm256_maskload_epi32(reinterpret_cast<const int*>(first + i), mask);
        const __m256i w = _mm256_mask_i32gather_epi32(_mm256_setzero_si256(), words32,
                                                      _mm256_srli_epi32(idx, 5), mask, 4);
        const __m256i shifted = _mm256_sllv_epi32(w, _mm256_sub_epi32(low5, _mm256_and_si256(idx, low5)));
        const unsigned bits = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(shifted))) &
                              ((1U << rem) - 1U);
        count += static_cast<std::uint32_t>(_mm_popcnt_u32(bits));
    }
    return count;
}

void positive_neighbor_counts_avx2(const CsrView& g, const std::uint64_t* bits, std::uint32_t* out) {
    const auto* words32 = reinterpret_cast<const int*>(bits);
    for (std::size_t v = 0; v < g.n; ++v) {
        out[v] = count_set(g.neighbors + g.offsets[v], g.offsets[v + 1] - g.offsets[v], words32);
    }
}

void majority_update_avx2(const CsrView& g, const std::uint64_t* in, std::uint64_t* out) {
    const auto* words32 = reinterpret_cast<const int*>(in);
    const std::size_t words = (g.n + 63) / 64;
    for (std::size_t w = 0; w < words; ++w) {
        const std::size_t first = w * 64;
        const std::size_t last = first + 64 < g.n ? first + 64 : g.n;
        std::uint64_t word = 0;
        for (std::size_t v = first; v < last; ++v) {
            const std::uint64_t deg = g.offsets[v + 1] - g.offsets[v];
            const std::uint64_t pos = count_set(g.neighbors + g.offsets[v], deg, words32);
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

constexpr KernelTable kAvx2{
    Level::Avx2,
    &popcount_avx2,
    &hamming_avx2,
    &positive_neighbor_counts_avx2,
    &majority_update_avx2,
};

}  // namespace

namespace detail {
const KernelTable* avx2_kernels() noexcept { return &kAvx2; }
}  // namespace detail

}  // namespace majdyn::simd

#else

namespace majdyn::simd::detail {
const KernelTable* avx2_kernels() noexcept { return nullptr; }
}  // namespace majdyn::simd::detail

#endif
