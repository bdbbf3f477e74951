#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace majdyn::probkit {

// Constants fitted on pilot sweeps of randomized small configurations; the
// underlying inequalities only assert that some universal constant exists.

/// Successive-mass smoothness: max diff * (m + n) p (1 - p). Pilot worst 0.35.
inline constexpr double kShiftConstant = 0.5;
/// Band for P[X = Y] * sqrt(np) in the lemma regime. Pilot range [0.24, 0.30].
inline constexpr double kThetaLow = 0.2;
inline constexpr double kThetaHigh = 0.8;
/// |P[X >= Y] - 1/2| * sqrt(np) / (1 + |n - m| p). Pilot worst 0.27.
inline constexpr double kGreaterEqualConstant = 0.5;
/// Four-binomial perturbation ratio. Pilot worst 0.53.
inline constexpr double kFourRvConstant = 3.0;
/// Berry-Esseen envelope: gap * sigma. Pilot worst 0.27.
inline constexpr double kBerryEsseenEnvelope = 1.0;
/// Ratio gap(4n) / gap(n) once sigma >= 1. Pilot worst 0.56.
inline constexpr double kBerryEsseenQuadrupleRatio = 0.7;
/// Slack for exact inequalities evaluated in floating point.
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for the Psi lower-bound grid.
inline constexpr double kPsiTolerance = 1e-9;

struct LemmaCheckRow {
    std::string name;
    std::uint64_t cases = 0;
    /// Largest observed value of the checked statistic.
    double worst = 0.0;
    /// Value `worst` must not exceed (for band checks, the upper end).
    double limit = 0.0;
    bool pass = false;
    std::string detail;
};

/// Runs every binomial-toolkit check on `cases` randomized configurations
/// drawn from `seed` and returns one row per check.
std::vector<LemmaCheckRow> run_lemma_suite(std::uint64_t cases, std::uint64_t seed);

}  // namespace majdyn::probkit
