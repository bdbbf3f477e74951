#include "majdyn/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace majdyn::simd {
namespace {

std::uint64_t popcount_neon(std::span<const std::uint64_t> words) {
    const std::size_t n = words.size();
    const std::uint64_t* data = words.data();
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint8x16_t bytes = vreinterpretq_u8_u64(vld1q_u64(data + i));
        acc = vaddq_u64(acc, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(bytes)))));
    }
    std::uint64_t total = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
    for (; i < n; ++i) {
        total += static_cast<std::uint64_t>(__builtin_popcountll(data[i]));
    }
    return total;
}

std::uint64_t hamming_neon(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    const std::size_t n = a.size();
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t x = veorq_u64(vld1q_u64(a.data() + i), vld1q_u64(b.data() + i));
        acc = vaddq_u64(acc, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(vreinterpretq_u8_u64(x))))));
    }
    std::uint64_t total = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
    for (; i < n; ++i) {
        total += static_cast<std::uint64_t>(__builtin_popcountll(a[i] ^ b[i]));
    }
    return total;
}

// NEON has no gather; the neighbor loops stay on the scalar path.
const KernelTable kNeon{
    Level::Neon,
    &popcount_neon,
    &hamming_neon,
    scalar_kernels().positive_neighbor_counts,
    scalar_kernels().majority_update,
};

}  // namespace

namespace detail {
const KernelTable* neon_kernels() noexcept { return &kNeon; }
}  // namespace detail

}  // namespace majdyn::simd

#else

namespace majdyn::simd::detail {
const KernelTable* neon_kernels() noexcept { return nullptr; }
}  // namespace majdyn::simd::detail

#endif
