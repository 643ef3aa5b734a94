#pragma once

#include <cstdint>
#include <string>

namespace panelcast {

/// Every data-parallel kernel has a serial reference path. Both paths produce
/// bit-identical results: parallel loops write into per-item slots and any
/// reduction happens afterwards in item order.
enum class Execution { serial, parallel };

Execution parse_execution(const std::string& text);

/// Threads OpenMP would use for a parallel region (1 without OpenMP).
int max_threads();

/// Stateless 64-bit mixer used to derive independent seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9E3779B97F4A7C15ull;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
	return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
	return splitmix64(a ^ splitmix64(b));
}

} // namespace panelcast
