#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dflow/error.hpp"
#include "dflow/rng.hpp"

namespace dflow::rl {

// Fully-connected network with ReLU hidden layers, a linear head, manual
// reverse-mode gradients, and Adam. Columns are batch samples. Templated on
// the scalar so tests can instantiate double and compare gradients against
// central finite differences; training uses float.
template <typename Scalar>
class Net {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Net() = default;

    // sizes = {input, hidden..., output}; weights ~ U(-1/sqrt(fan_in), +),
    // biases zero. Draws from the given generator in a fixed order.
    Net(const std::vector<int>& sizes, Rng& rng) {
        if (sizes.size() < 2) throw InvariantViolation("network needs at least two sizes");
        const std::size_t layers = sizes.size() - 1;
        w.resize(layers);
        b.resize(layers);
        gw.resize(layers);
        gb.resize(layers);
        mw.resize(layers);
        vw.resize(layers);
        mb.resize(layers);
        vb.resize(layers);
        for (std::size_t l = 0; l < layers; ++l) {
            const int in = sizes[l];
            const int out = sizes[l + 1];
            if (in < 1 || out < 1) throw InvariantViolation("network layer size must be >= 1");
            const double bound = 1.0 / std::sqrt(static_cast<double>(in));
            w[l].resize(out, in);
            for (int r = 0; r < out; ++r) {
                for (int c = 0; c < in; ++c) {
                    w[l](r, c) = static_cast<Scalar>(rng.uniform(-bound, bound));
                }
            }
            b[l] = Vector::Zero(out);
            gw[l] = Matrix::Zero(out, in);
            gb[l] = Vector::Zero(out);
            mw[l] = Matrix::Zero(out, in);
            vw[l] = Matrix::Zero(out, in);
            mb[l] = Vector::Zero(out);
            vb[l] = Vector::Zero(out);
        }
    }

    int input_size() const { return static_cast<int>(w.front().cols()); }
    int output_size() const { return static_cast<int>(w.back().rows()); }
    int layer_count() const { return static_cast<int>(w.size()); }

    // x: input_size x batch. Caches activations for backward().
    const Matrix& forward(const Matrix& x) {
        const std::size_t layers = w.size();
        acts_.resize(layers + 1);
        acts_[0] = x;
        for (std::size_t l = 0; l < layers; ++l) {
            Matrix z = (w[l] * acts_[l]).colwise() + b[l];
            if (l + 1 < layers) z = z.cwiseMax(Scalar(0));  // ReLU on hidden layers
            acts_[l + 1] = std::move(z);
        }
        return acts_.back();
    }

    // dy: gradient of the loss w.r.t. the output of the last forward() call.
    // Accumulates parameter gradients and returns the gradient w.r.t. the
    // input (used to push critic gradients into the actor).
    Matrix backward(const Matrix& dy) {
        const std::size_t layers = w.size();
        if (acts_.size() != layers + 1) throw InvariantViolation("backward before forward");
        Matrix delta = dy;
        for (std::size_t l = layers; l-- > 0;) {
            if (l + 1 < layers) {
                // ReLU mask from the cached post-activation (positive iff preactivation was).
                delta = delta.cwiseProduct(
                    (acts_[l + 1].array() > Scalar(0)).template cast<Scalar>().matrix());
            }
            gw[l] += delta * acts_[l].transpose();
            gb[l] += delta.rowwise().sum();
            delta = (w[l].transpose() * delta).eval();
        }
        return delta;
    }

    void zero_grad() {
        for (std::size_t l = 0; l < w.size(); ++l) {
            gw[l].setZero();
            gb[l].setZero();
        }
    }

    void adam_step(Scalar lr, Scalar beta1 = Scalar(0.9), Scalar beta2 = Scalar(0.999),
                   Scalar eps = Scalar(1e-8)) {
        ++adam_t_;
        const Scalar c1 = Scalar(1) - std::pow(beta1, Scalar(adam_t_));
        const Scalar c2 = Scalar(1) - std::pow(beta2, Scalar(adam_t_));
        for (std::size_t l = 0; l < w.size(); ++l) {
            mw[l] = beta1 * mw[l] + (Scalar(1) - beta1) * gw[l];
            vw[l] = beta2 * vw[l] + (Scalar(1) - beta2) * gw[l].cwiseProduct(gw[l]);
            w[l] -= lr * (mw[l] / c1)
                        .cwiseQuotient((vw[l] / c2).cwiseSqrt() +
                                       Matrix::Constant(vw[l].rows(), vw[l].cols(), eps));
            mb[l] = beta1 * mb[l] + (Scalar(1) - beta1) * gb[l];
            vb[l] = beta2 * vb[l] + (Scalar(1) - beta2) * gb[l].cwiseProduct(gb[l]);
            b[l] -= lr * (mb[l] / c1)
                        .cwiseQuotient((vb[l] / c2).cwiseSqrt() + Vector::Constant(vb[l].rows(), eps));
        }
    }

    // this <- (1 - tau) * this + tau * online, parameter-wise.
    void soft_update_from(const Net& online, Scalar tau) {
        for (std::size_t l = 0; l < w.size(); ++l) {
            w[l] = (Scalar(1) - tau) * w[l] + tau * online.w[l];
            b[l] = (Scalar(1) - tau) * b[l] + tau * online.b[l];
        }
    }

    // Parameters, gradients, and Adam state; open for tests and checkpoints.
    std::vector<Matrix> w, gw, mw, vw;
    std::vector<Vector> b, gb, mb, vb;

private:
    std::vector<Matrix> acts_;
    long long adam_t_ = 0;
};

}  // namespace dflow::rl
