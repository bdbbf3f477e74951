#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace majdyn {

/// Bit-packed ±1 assignment on vertices 0..n-1; bit set means +1.
/// Padding bits past n are always zero.
class OpinionVector {
public:
    OpinionVector() = default;

    /// All coordinates set to `positive ? +1 : -1`.
    explicit OpinionVector(std::size_t n, bool positive = false)
        : n_(n), words_((n + 63) / 64, positive ? ~std::uint64_t{0} : 0) {
        clear_padding();
    }

    std::size_t size() const noexcept { return n_; }

    bool positive(std::size_t v) const noexcept { return (words_[v >> 6] >> (v & 63)) & 1U; }
    int sign(std::size_t v) const noexcept { return positive(v) ? 1 : -1; }

    void set(std::size_t v, bool positive) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (v & 63);
        if (positive) {
            words_[v >> 6] |= mask;
        } else {
            words_[v >> 6] &= ~mask;
        }
    }
    void set_sign(std::size_t v, int sign) noexcept { set(v, sign > 0); }

    /// Flips every coordinate.
    void negate() noexcept {
        for (auto& w : words_) {
            w = ~w;
        }
        clear_padding();
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    /// Re-zeroes padding after writing through words().
    void clear_padding() noexcept {
        if (n_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
        }
    }

    friend bool operator==(const OpinionVector&, const OpinionVector&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace majdyn
