#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace panelcast {

/// Hyper-parameters of one network. There is deliberately no step-size field:
/// the optimizer is learning-rate free.
struct NetworkConfig {
	int cell_dimension = 24;
	int hidden_layers = 1;
	int minibatch_size = 8;
	int epoch_size = 3;  // passes over the training windows per epoch
	int max_epochs = 12;
	double gaussian_noise_std = 3e-4;
	double init_std = 3e-4;
	double l2_weight = 2e-4;
	std::uint64_t seed = 1;

	bool operator==(const NetworkConfig&) const = default;
	void validate() const;
};

struct NetworkShape {
	int input_channels = 1;
	int cell_dimension = 4;
	int hidden_layers = 1;
	int output_size = 1;

	bool operator==(const NetworkShape&) const = default;
	int layer_input(int layer) const { return layer == 0 ? input_channels : cell_dimension; }
};

/// Flat parameter vector with named blocks. Per layer: input weights W
/// (4H x D), recurrent weights U (4H x H), bias b (4H), gate order i, f, g, o.
/// Then the affine head V (H x M) with no bias. Gradients use the same type.
class NetworkParameters {
public:
	struct Block {
		std::string name;
		std::size_t offset = 0;
		int rows = 0;
		int cols = 0;
		bool is_bias = false;
		std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
	};

	NetworkParameters() = default;
	explicit NetworkParameters(const NetworkShape& shape);

	const NetworkShape& shape() const { return shape_; }
	const std::vector<Block>& blocks() const { return blocks_; }
	std::span<double> values() { return values_; }
	std::span<const double> values() const { return values_; }
	std::size_t size() const { return values_.size(); }

	using Map = Eigen::Map<Eigen::MatrixXd>;
	using ConstMap = Eigen::Map<const Eigen::MatrixXd>;

	Map input_weights(int layer) { return map(block(layer, 0)); }
	Map recurrent_weights(int layer) { return map(block(layer, 1)); }
	Map bias(int layer) { return map(block(layer, 2)); }
	Map head() { return map(blocks_.back()); }
	ConstMap input_weights(int layer) const { return map(block(layer, 0)); }
	ConstMap recurrent_weights(int layer) const { return map(block(layer, 1)); }
	ConstMap bias(int layer) const { return map(block(layer, 2)); }
	ConstMap head() const { return map(blocks_.back()); }

	void set_zero();
	NetworkParameters& operator+=(const NetworkParameters& other);
	NetworkParameters& operator*=(double factor);
	bool operator==(const NetworkParameters& other) const;

	/// Sum of squares over every non-bias block.
	double weight_sum_of_squares() const;

private:
	const Block& block(int layer, int which) const { return blocks_[static_cast<std::size_t>(3 * layer + which)]; }
	Map map(const Block& b) { return Map(values_.data() + b.offset, b.rows, b.cols); }
	ConstMap map(const Block& b) const { return ConstMap(values_.data() + b.offset, b.rows, b.cols); }

	NetworkShape shape_;
	std::vector<Block> blocks_;
	std::vector<double> values_;
};

/// i.i.d. normal(0, init_std^2) weights from a generator seeded by config.seed.
/// Biases start at zero except the forget gate, which starts at 1.
NetworkParameters init_parameters(const NetworkConfig& config, int input_channels, int output_size);

/// Activations retained for backpropagation.
struct ForwardCache {
	struct Layer {
		Eigen::MatrixXd inputs; // D x T
		Eigen::MatrixXd gates;  // 4H x T, post-activation (i, f, g, o)
		Eigen::MatrixXd cells;  // H x (T + 1), column 0 is the initial state
		Eigen::MatrixXd hidden; // H x (T + 1)
	};
	std::vector<Layer> layers;
	Eigen::VectorXd prediction;
};

/// Runs the stacked LSTM over `input` (steps x channels) and applies the head to
/// the top layer's final hidden state. With noise_std > 0, i.i.d. Gaussian
/// noise is added to the input first. Throws NumericalError on non-finite
/// activations, naming the layer and step.
Eigen::VectorXd forward(const NetworkParameters& params, const Eigen::MatrixXd& input, double noise_std,
						std::mt19937_64* rng, ForwardCache* cache = nullptr);

/// Mean absolute error over the horizon plus l2_weight * sum of squared weights.
double loss(const Eigen::VectorXd& prediction, const Eigen::VectorXd& target, const NetworkParameters& params,
			double l2_weight);

/// Mean absolute error only.
double data_loss(const Eigen::VectorXd& prediction, const Eigen::VectorXd& target);

/// Exact gradient of `loss` by backpropagation through time. The subgradient of
/// |x| at 0 is taken as 0. `gradient` must have the parameters' shape.
void backward(const NetworkParameters& params, const ForwardCache& cache, const Eigen::VectorXd& target,
			  double l2_weight, NetworkParameters& gradient);

/// Adds 2 * l2_weight * w to the gradient of every non-bias parameter.
void add_l2_gradient(const NetworkParameters& params, double l2_weight, NetworkParameters& gradient);

} // namespace panelcast
