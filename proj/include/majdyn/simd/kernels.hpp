#pragma once

// Data-parallel inner loops of the simulator. Every kernel has a portable
// scalar reference; vector variants must agree with it bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace majdyn::simd {

enum class Level { Scalar, Avx2, Neon };

std::string_view to_string(Level level) noexcept;

/// Read-only compressed adjacency. offsets has n + 1 entries.
struct CsrView {
    std::size_t n = 0;
    const std::uint64_t* offsets = nullptr;
    const std::uint32_t* neighbors = nullptr;
};

struct KernelTable {
    Level level;

    /// Number of set bits.
    std::uint64_t (*popcount)(std::span<const std::uint64_t> words);

    /// Number of differing bits. Both spans have equal length.
    std::uint64_t (*hamming)(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

    /// out[v] = number of neighbors u of v whose bit is set.
    void (*positive_neighbor_counts)(const CsrView& g, const std::uint64_t* bits, std::uint32_t* out);

    /// One synchronous majority update: bit v of `out` is 1 if more than half
    /// of v's neighbors are set, 0 if fewer, and bit v of `in` on a tie.
    /// `out` holds ceil(n/64) words; padding bits are cleared.
    void (*majority_update)(const CsrView& g, const std::uint64_t* in, std::uint64_t* out);
};

const KernelTable& scalar_kernels() noexcept;

/// Kernels for `level`, or nullptr when the level was not compiled in or the
/// running CPU lacks the instructions.
const KernelTable* kernels_for(Level level) noexcept;

/// Every level usable on this machine, scalar first.
std::vector<Level> available_levels();

/// Kernel table used by the library. Chosen once from CPU features; the
/// MAJDYN_SIMD environment variable (scalar|avx2|neon) overrides.
const KernelTable& active_kernels() noexcept;

/// Forces a level for the rest of the process. Returns false (and changes
/// nothing) if the level is unavailable.
bool set_active_level(Level level) noexcept;

namespace detail {
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;
}  // namespace detail

}  // namespace majdyn::simd
