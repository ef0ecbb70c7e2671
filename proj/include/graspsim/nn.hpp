#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace graspsim::nn {

class NetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully connected network with ReLU hidden layers and a scalar output.
/// Parameters live in one flat vector: per layer, W (out x in, row-major)
/// followed by b.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<int> layer_sizes);

    const std::vector<int>& layer_sizes() const { return sizes_; }
    int input_size() const { return sizes_.front(); }
    std::size_t param_count() const { return params_.size(); }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    /// Kaiming normal: N(0, 2/fan_in) weights, zero biases.
    void kaiming_init(std::mt19937_64& rng);

    struct Tape {
        std::vector<std::vector<double>> activations;  // post-ReLU, one per layer incl. input
    };

    double forward(std::span<const double> input) const;
    double forward(std::span<const double> input, Tape& tape) const;

    /// Accumulates d(out)/d(params) * dout into `grad` (size param_count()).
    void backward(const Tape& tape, double dout, std::span<double> grad) const;

    bool same_architecture(const Mlp& other) const { return sizes_ == other.sizes_; }

private:
    std::vector<int> sizes_;
    std::vector<double> params_;
};

/// Adaptive moment estimation with bias correction.
class Adam {
public:
    explicit Adam(std::size_t n = 0, double lr = 1e-4, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);

    void step(std::span<double> params, std::span<const double> grad);
    std::uint64_t steps() const { return t_; }
    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::uint64_t t_ = 0;
    std::vector<double> m_, v_;
};

/// 0.5*d^2 below 1, d - 0.5 above.
double huber_loss(double delta);
/// d(loss)/d(q) for delta = |y - q|; magnitude clipped to 1.
double huber_grad_wrt_q(double q, double y);

}  // namespace graspsim::nn
