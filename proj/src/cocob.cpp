#include "panelcast/cocob.hpp"

#include "panelcast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace panelcast {

CocobState CocobState::start(std::span<const double> params, double alpha) {
	if (!(alpha > 0.0))
		throw ConfigError("coin-betting alpha must be positive");
	CocobState s;
	s.alpha = alpha;
	const std::size_t n = params.size();
	s.max_gradient.assign(n, 0.0);
	s.abs_gradient.assign(n, 0.0);
	s.gradient_sum.assign(n, 0.0);
	s.reward.assign(n, 0.0);
	s.initial.assign(params.begin(), params.end());
	return s;
}

void cocob_step(CocobState& state, std::span<double> params, std::span<const double> gradient) {
	const std::size_t n = state.size();
	if (params.size() != n || gradient.size() != n)
		throw ShapeError("optimizer state, parameters and gradient sizes differ");
	for (std::size_t i = 0; i < n; ++i) {
		const double g = -gradient[i];
		double& lmax = state.max_gradient[i];
		lmax = std::max(lmax, std::abs(g));
		state.abs_gradient[i] += std::abs(g);
		state.reward[i] = std::max(state.reward[i] + (params[i] - state.initial[i]) * g, 0.0);
		state.gradient_sum[i] += g;
		if (lmax == 0.0)
			continue;
		const double denom = lmax * std::max(state.abs_gradient[i] + lmax, state.alpha * lmax);
		params[i] = state.initial[i] + state.gradient_sum[i] / denom * (lmax + state.reward[i]);
	}
}

} // namespace panelcast
