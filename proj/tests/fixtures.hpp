#pragma once

#include <cstddef>
#include <cstdint>

// Sizes and seeds shared by the acceptance and statistical tests.
namespace fixtures {

inline constexpr std::uint64_t kExactVsMonteCarloSeed = 20240607;

inline constexpr std::uint64_t kWidthScalingSeed = 8;
inline constexpr std::size_t kWidthScalingTrials = 4000;
inline constexpr int kWidthScalingLevels = 60;

inline constexpr std::uint64_t kStreamSeed = 5150;
// wild: n inputs, k = C n items
inline constexpr std::size_t kWildInputs = 300;
inline constexpr std::size_t kWildItems = 2048 * kWildInputs;
inline constexpr std::size_t kStreamOrderTrials = 100;
// exponential: alpha = min(eps^2, delta^2) / (c log(4 / (eps delta)))
inline constexpr double kExponentialConstant = 2.0;
inline constexpr std::size_t kExponentialInputs = 1500;
inline constexpr std::size_t kExponentialItems = 20000;

inline constexpr std::uint64_t kLearningSeed = 4096;
inline constexpr std::size_t kLearningTraceTrials = 200;

} // namespace fixtures
