#pragma once

#include <cstdint>

namespace saddle {

/// Counter-based Gaussian noise. Every draw is a pure function of
/// (seed, axis, step), so a realization is reproducible on any platform and
/// independent of evaluation order or thread count.
///
/// Seed splitting for ensembles: member i of an ensemble with master seed S
/// uses derive_seed(S, i).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Standard normal variate keyed by (seed, axis, step), via Box-Muller on two
/// 53-bit uniforms drawn from the hashed counter.
double standard_normal(std::uint64_t seed, std::uint32_t axis, std::uint64_t step);

} // namespace saddle
