#pragma once

#include <cstdint>
#include <random>

namespace ptomo {

/// The project-wide random engine is the 64-bit Mersenne Twister. Its output
/// sequence is fixed by the C++ standard, so seeded runs are reproducible on
/// any conforming library; the distributions layered on top are the ones of
/// the standard library in use.
using Rng = std::mt19937_64;

/// Generator for stream `stream` of the run seeded with `seed`. Distinct
/// streams are statistically independent for practical purposes; trial t of a
/// case study uses stream t.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double standard_normal(Rng& rng);
double uniform01(Rng& rng);

}  // namespace ptomo
