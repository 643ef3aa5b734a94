#pragma once

#include <span>
#include <vector>

namespace panelcast {

/// Per-parameter state of the COCOB-Backprop coin-betting optimizer.
///
/// Each coordinate bets a fraction of its accumulated "wealth" (L + reward) in
/// the direction of the summed negative gradients. The bet is normalised by the
/// running maximum gradient magnitude, so there is no step size to tune.
struct CocobState {
	double alpha = 100.0;
	std::vector<double> max_gradient;   // L
	std::vector<double> abs_gradient;   // G, sum of |g|
	std::vector<double> gradient_sum;   // theta, sum of negative gradients
	std::vector<double> reward;         // R
	std::vector<double> initial;        // w_1

	static CocobState start(std::span<const double> params, double alpha = 100.0);
	std::size_t size() const { return initial.size(); }
};

/// One update:
///   L = max(L, |g|), G += |g|, R = max(R - (w - w1) g, 0), theta -= g,
///   w = w1 + theta / (L max(G + L, alpha L)) * (L + R).
/// Coordinates that have only seen zero gradients stay at their initial value.
void cocob_step(CocobState& state, std::span<double> params, std::span<const double> gradient);

} // namespace panelcast
