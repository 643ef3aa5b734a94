#include "panelcast/lstm.hpp"

#include "panelcast/errors.hpp"

#include <cmath>

namespace panelcast {

void NetworkConfig::validate() const {
	if (cell_dimension < 1 || hidden_layers < 1 || minibatch_size < 1 || epoch_size < 1 || max_epochs < 1)
		throw ConfigError("network sizes, batch size and epoch counts must be at least 1");
	if (gaussian_noise_std < 0.0 || init_std < 0.0 || l2_weight < 0.0)
		throw ConfigError("noise, init and l2 scales must be non-negative");
}

NetworkParameters::NetworkParameters(const NetworkShape& shape) : shape_(shape) {
	if (shape.input_channels < 1 || shape.cell_dimension < 1 || shape.hidden_layers < 1 || shape.output_size < 1)
		throw ConfigError("invalid network shape");
	const int h = shape.cell_dimension;
	std::size_t offset = 0;
	auto add = [&](std::string name, int rows, int cols, bool is_bias) {
		blocks_.push_back(Block{std::move(name), offset, rows, cols, is_bias});
		offset += blocks_.back().size();
	};
	for (int l = 0; l < shape.hidden_layers; ++l) {
		const std::string prefix = "layer" + std::to_string(l) + ".";
		add(prefix + "input_weights", 4 * h, shape.layer_input(l), false);
		add(prefix + "recurrent_weights", 4 * h, h, false);
		add(prefix + "bias", 4 * h, 1, true);
	}
	add("head", h, shape.output_size, false);
	values_.assign(offset, 0.0);
}

void NetworkParameters::set_zero() {
	std::fill(values_.begin(), values_.end(), 0.0);
}

NetworkParameters& NetworkParameters::operator+=(const NetworkParameters& other) {
	if (other.values_.size() != values_.size())
		throw ShapeError("parameter shapes differ");
	for (std::size_t i = 0; i < values_.size(); ++i)
		values_[i] += other.values_[i];
	return *this;
}

NetworkParameters& NetworkParameters::operator*=(double factor) {
	for (double& v : values_)
		v *= factor;
	return *this;
}

bool NetworkParameters::operator==(const NetworkParameters& other) const {
	return shape_ == other.shape_ && values_ == other.values_;
}

double NetworkParameters::weight_sum_of_squares() const {
	double acc = 0.0;
	for (const auto& b : blocks_) {
		if (b.is_bias)
			continue;
		for (std::size_t i = 0; i < b.size(); ++i)
			acc += values_[b.offset + i] * values_[b.offset + i];
	}
	return acc;
}

NetworkParameters init_parameters(const NetworkConfig& config, int input_channels, int output_size) {
	config.validate();
	NetworkParameters params(NetworkShape{input_channels, config.cell_dimension, config.hidden_layers, output_size});
	std::mt19937_64 rng(config.seed);
	std::normal_distribution<double> normal(0.0, config.init_std);
	auto values = params.values();
	for (const auto& b : params.blocks()) {
		if (b.is_bias)
			continue;
		for (std::size_t i = 0; i < b.size(); ++i)
			values[b.offset + i] = normal(rng);
	}
	const int h = config.cell_dimension;
	for (int l = 0; l < config.hidden_layers; ++l)
		params.bias(l).middleRows(h, h).setOnes();
	return params;
}

namespace {

inline double sigmoid(double x) {
	return 1.0 / (1.0 + std::exp(-x));
}

[[noreturn]] void report_non_finite(const ForwardCache& cache, int layers) {
	for (int l = 0; l < layers; ++l) {
		const auto& hidden = cache.layers[static_cast<std::size_t>(l)].hidden;
		for (Eigen::Index t = 1; t < hidden.cols(); ++t)
			if (!hidden.col(t).allFinite())
				throw NumericalError("non-finite activation at layer " + std::to_string(l) + ", step " +
									 std::to_string(t - 1));
	}
	throw NumericalError("non-finite network output");
}

} // namespace

Eigen::VectorXd forward(const NetworkParameters& params, const Eigen::MatrixXd& input, double noise_std,
						std::mt19937_64* rng, ForwardCache* cache) {
	const auto& shape = params.shape();
	if (input.cols() != shape.input_channels)
		throw ShapeError("input has " + std::to_string(input.cols()) + " channels, network expects " +
						 std::to_string(shape.input_channels));
	const int h = shape.cell_dimension;
	const Eigen::Index steps = input.rows();

	ForwardCache local;
	ForwardCache& c = cache ? *cache : local;
	c.layers.resize(static_cast<std::size_t>(shape.hidden_layers));

	Eigen::MatrixXd x = input.transpose(); // D x T
	if (noise_std > 0.0) {
		if (rng == nullptr)
			throw ConfigError("noise injection requires a random generator");
		std::normal_distribution<double> noise(0.0, noise_std);
		for (Eigen::Index t = 0; t < x.cols(); ++t)
			for (Eigen::Index d = 0; d < x.rows(); ++d)
				x(d, t) += noise(*rng);
	}

	for (int l = 0; l < shape.hidden_layers; ++l) {
		auto& layer = c.layers[static_cast<std::size_t>(l)];
		layer.inputs = std::move(x);
		layer.gates.resize(4 * h, steps);
		layer.cells.setZero(h, steps + 1);
		layer.hidden.setZero(h, steps + 1);
		const auto w = params.input_weights(l);
		const auto u = params.recurrent_weights(l);
		const auto b = params.bias(l);
		layer.gates.noalias() = w * layer.inputs;
		layer.gates.colwise() += b.col(0);
		for (Eigen::Index t = 0; t < steps; ++t) {
			auto a = layer.gates.col(t);
			a.noalias() += u * layer.hidden.col(t);
			for (int k = 0; k < h; ++k) {
				const double ig = sigmoid(a(k));
				const double fg = sigmoid(a(h + k));
				const double gg = std::tanh(a(2 * h + k));
				const double og = sigmoid(a(3 * h + k));
				a(k) = ig;
				a(h + k) = fg;
				a(2 * h + k) = gg;
				a(3 * h + k) = og;
				const double cell = fg * layer.cells(k, t) + ig * gg;
				layer.cells(k, t + 1) = cell;
				layer.hidden(k, t + 1) = og * std::tanh(cell);
			}
		}
		x = layer.hidden.rightCols(steps);
	}

	const auto& top = c.layers.back().hidden;
	c.prediction.noalias() = params.head().transpose() * top.col(steps);
	if (!c.prediction.allFinite())
		report_non_finite(c, shape.hidden_layers);
	return c.prediction;
}

double data_loss(const Eigen::VectorXd& prediction, const Eigen::VectorXd& target) {
	if (prediction.size() != target.size())
		throw ShapeError("prediction and target lengths differ");
	return (prediction - target).cwiseAbs().mean();
}

double loss(const Eigen::VectorXd& prediction, const Eigen::VectorXd& target, const NetworkParameters& params,
			double l2_weight) {
	return data_loss(prediction, target) + l2_weight * params.weight_sum_of_squares();
}

void add_l2_gradient(const NetworkParameters& params, double l2_weight, NetworkParameters& gradient) {
	if (l2_weight == 0.0)
		return;
	auto p = params.values();
	auto g = gradient.values();
	for (const auto& b : params.blocks()) {
		if (b.is_bias)
			continue;
		for (std::size_t i = 0; i < b.size(); ++i)
			g[b.offset + i] += 2.0 * l2_weight * p[b.offset + i];
	}
}

void backward(const NetworkParameters& params, const ForwardCache& cache, const Eigen::VectorXd& target,
			  double l2_weight, NetworkParameters& gradient) {
	const auto& shape = params.shape();
	if (!(gradient.shape() == shape))
		gradient = NetworkParameters(shape);
	if (cache.prediction.size() != target.size())
		throw ShapeError("prediction and target lengths differ");
	const int h = shape.cell_dimension;
	const Eigen::Index m = target.size();

	Eigen::VectorXd dy(m);
	for (Eigen::Index k = 0; k < m; ++k) {
		const double diff = cache.prediction(k) - target(k);
		dy(k) = (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)) / static_cast<double>(m);
	}

	const auto& top = cache.layers.back();
	const Eigen::Index steps = top.hidden.cols() - 1;
	gradient.head().noalias() = top.hidden.col(steps) * dy.transpose();

	Eigen::MatrixXd d_hidden_above = Eigen::MatrixXd::Zero(h, steps);
	d_hidden_above.col(steps - 1).noalias() = params.head() * dy;

	Eigen::MatrixXd d_gates(4 * h, steps);
	Eigen::VectorXd dh_next(h), dc_next(h), dh(h);
	for (int l = shape.hidden_layers - 1; l >= 0; --l) {
		const auto& layer = cache.layers[static_cast<std::size_t>(l)];
		const auto u = params.recurrent_weights(l);
		dh_next.setZero();
		dc_next.setZero();
		for (Eigen::Index t = steps - 1; t >= 0; --t) {
			dh = d_hidden_above.col(t) + dh_next;
			const auto gates = layer.gates.col(t);
			for (int k = 0; k < h; ++k) {
				const double ig = gates(k), fg = gates(h + k), gg = gates(2 * h + k), og = gates(3 * h + k);
				const double tc = std::tanh(layer.cells(k, t + 1));
				const double dc = dh(k) * og * (1.0 - tc * tc) + dc_next(k);
				d_gates(k, t) = dc * gg * ig * (1.0 - ig);
				d_gates(h + k, t) = dc * layer.cells(k, t) * fg * (1.0 - fg);
				d_gates(2 * h + k, t) = dc * ig * (1.0 - gg * gg);
				d_gates(3 * h + k, t) = dh(k) * tc * og * (1.0 - og);
				dc_next(k) = dc * fg;
			}
			dh_next.noalias() = u.transpose() * d_gates.col(t);
		}
		gradient.input_weights(l).noalias() = d_gates * layer.inputs.transpose();
		gradient.recurrent_weights(l).noalias() = d_gates * layer.hidden.leftCols(steps).transpose();
		gradient.bias(l) = d_gates.rowwise().sum();
		if (l > 0)
			d_hidden_above.noalias() = params.input_weights(l).transpose() * d_gates;
	}

	add_l2_gradient(params, l2_weight, gradient);
	for (double g : gradient.values())
		if (!std::isfinite(g))
			throw NumericalError("non-finite gradient");
}

} // namespace panelcast
