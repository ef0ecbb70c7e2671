#include "graspsim/nn.hpp"

#include <algorithm>
#include <cmath>

namespace graspsim::nn {

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2 || sizes_.back() != 1) throw NetError("mlp: need >= 2 layers ending in one output");
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        if (sizes_[l] <= 0) throw NetError("mlp: layer sizes must be positive");
        n += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
    }
    params_.assign(n, 0.0);
}

void Mlp::kaiming_init(std::mt19937_64& rng) {
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / in));
        for (int k = 0; k < in * out; ++k) params_[off++] = dist(rng);
        for (int k = 0; k < out; ++k) params_[off++] = 0.0;
    }
}

double Mlp::forward(std::span<const double> input) const {
    Tape tape;
    return forward(input, tape);
}

double Mlp::forward(std::span<const double> input, Tape& tape) const {
    if (static_cast<int>(input.size()) != sizes_.front()) throw NetError("mlp: input size mismatch");
    tape.activations.resize(sizes_.size());
    tape.activations[0].assign(input.begin(), input.end());
    std::size_t off = 0;
    const std::size_t last = sizes_.size() - 1;
    for (std::size_t l = 0; l < last; ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double* w = params_.data() + off;
        const double* b = w + static_cast<std::size_t>(in) * out;
        const std::vector<double>& x = tape.activations[l];
        std::vector<double>& y = tape.activations[l + 1];
        y.resize(static_cast<std::size_t>(out));
        for (int o = 0; o < out; ++o) {
            const double* row = w + static_cast<std::size_t>(o) * in;
            double s = b[o];
            for (int i = 0; i < in; ++i) s += row[i] * x[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(o)] = (l + 1 < last) ? std::max(s, 0.0) : s;
        }
        off += static_cast<std::size_t>(in) * out + out;
    }
    return tape.activations[last][0];
}

void Mlp::backward(const Tape& tape, double dout, std::span<double> grad) const {
    if (grad.size() != params_.size()) throw NetError("mlp: gradient size mismatch");
    const std::size_t last = sizes_.size() - 1;
    std::vector<std::size_t> offsets(last);
    std::size_t off = 0;
    for (std::size_t l = 0; l < last; ++l) {
        offsets[l] = off;
        off += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] + sizes_[l + 1];
    }

    std::vector<double> delta{dout};  // d(out)/d(pre-activation) of layer l+1
    for (std::size_t l = last; l-- > 0;) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double* w = params_.data() + offsets[l];
        double* gw = grad.data() + offsets[l];
        double* gb = gw + static_cast<std::size_t>(in) * out;
        const std::vector<double>& x = tape.activations[l];
        for (int o = 0; o < out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            if (d == 0.0) continue;
            double* grow = gw + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) grow[i] += d * x[static_cast<std::size_t>(i)];
            gb[o] += d;
        }
        if (l == 0) break;
        std::vector<double> prev(static_cast<std::size_t>(in), 0.0);
        for (int o = 0; o < out; ++o) {
            const double d = delta[static_cast<std::size_t>(o)];
            if (d == 0.0) continue;
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) prev[static_cast<std::size_t>(i)] += d * row[i];
        }
        for (int i = 0; i < in; ++i)
            if (x[static_cast<std::size_t>(i)] <= 0.0) prev[static_cast<std::size_t>(i)] = 0.0;  // ReLU gate
        delta = std::move(prev);
    }
}

Adam::Adam(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) throw NetError("adam: size mismatch");
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
}

double huber_loss(double delta) {
    return delta < 1.0 ? 0.5 * delta * delta : delta - 0.5;
}

double huber_grad_wrt_q(double q, double y) {
    return std::clamp(q - y, -1.0, 1.0);
}

}  // namespace graspsim::nn
