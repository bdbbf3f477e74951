#include "majdyn/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace majdyn::simd {
namespace {

bool cpu_supports(Level level) noexcept {
    switch (level) {
        case Level::Scalar:
            return true;
        case Level::Avx2:
#if defined(__x86_64__)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
            return false;
#endif
        case Level::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* choose_default() noexcept {
    if (const char* env = std::getenv("MAJDYN_SIMD")) {
        const std::string want(env);
        for (Level level : {Level::Scalar, Level::Avx2, Level::Neon}) {
            if (want == to_string(level)) {
                if (const KernelTable* table = kernels_for(level)) {
                    return table;
                }
            }
        }
    }
    if (const KernelTable* table = kernels_for(Level::Avx2)) {
        return table;
    }
    if (const KernelTable* table = kernels_for(Level::Neon)) {
        return table;
    }
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{choose_default()};
    return slot;
}

}  // namespace

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::Scalar:
            return "scalar";
        case Level::Avx2:
            return "avx2";
        case Level::Neon:
            return "neon";
    }
    return "unknown";
}

const KernelTable* kernels_for(Level level) noexcept {
    if (!cpu_supports(level)) {
        return nullptr;
    }
    switch (level) {
        case Level::Scalar:
            return &scalar_kernels();
        case Level::Avx2:
            return detail::avx2_kernels();
        case Level::Neon:
            return detail::neon_kernels();
    }
    return nullptr;
}

std::vector<Level> available_levels() {
    std::vector<Level> levels;
    for (Level level : {Level::Scalar, Level::Avx2, Level::Neon}) {
        if (kernels_for(level) != nullptr) {
            levels.push_back(level);
        }
    }
    return levels;
}

const KernelTable& active_kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

bool set_active_level(Level level) noexcept {
    const KernelTable* table = kernels_for(level);
    if (table == nullptr) {
        return false;
    }
    active_slot().store(table, std::memory_order_release);
    return true;
}

}  // namespace majdyn::simd
