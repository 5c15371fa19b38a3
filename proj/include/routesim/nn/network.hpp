#pragma once

#include <cassert>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "routesim/error.hpp"
#include "routesim/rng.hpp"

namespace routesim::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatMap = Eigen::Map<Matrix>;
using ConstMatMap = Eigen::Map<const Matrix>;

// Value network: a block-diagonal first dense layer (one subset per input
// block), a ReLU trunk, one LSTM step and a linear head. All parameters live
// in a single flat 64-bit buffer so optimizers, checkpoints and gradient
// checks can treat the network as one vector.
struct NetworkSpec {
    std::vector<int> block_widths;        // one-hot input blocks, concatenated
    int subset_width = 32;                // first-layer units per block
    std::vector<int> trunk_widths = {128, 128};
    int lstm_width = 128;
    bool use_lstm = true;                 // false: ReLU dense layer of lstm_width
    int output_width = 0;

    int input_width() const {
        return std::accumulate(block_widths.begin(), block_widths.end(), 0);
    }
    int fc1_width() const { return subset_width * static_cast<int>(block_widths.size()); }

    void validate() const {
        if (block_widths.empty() || output_width <= 0 || subset_width <= 0 || lstm_width <= 0)
            throw Error("invalid network spec");
        for (int w : block_widths)
            if (w <= 0) throw Error("invalid network spec: block width");
        for (int w : trunk_widths)
            if (w <= 0) throw Error("invalid network spec: trunk width");
    }

    bool operator==(const NetworkSpec&) const = default;
};

struct HiddenState {
    Vector h, c;
};

class RecurrentQNet {
public:
    explicit RecurrentQNet(NetworkSpec spec) : spec_(std::move(spec)) {
        spec_.validate();
        build_layout();
        theta_.assign(param_count_, 0.0);
    }

    const NetworkSpec& spec() const { return spec_; }
    int param_count() const { return param_count_; }
    std::span<double> params() { return theta_; }
    std::span<const double> params() const { return theta_; }

    HiddenState initial_state() const {
        return {Vector::Zero(spec_.lstm_width), Vector::Zero(spec_.lstm_width)};
    }

    // Glorot-uniform weights, zero biases, forget-gate bias +1.
    void init_weights(Rng& rng) {
        for (const Entry& e : entries_) {
            MatMap m(theta_.data() + e.offset, e.rows, e.cols);
            if (e.cols == 1) {
                m.setZero();
            } else {
                const double r = std::sqrt(6.0 / (e.rows + e.cols));
                for (int c = 0; c < e.cols; ++c)
                    for (int rr = 0; rr < e.rows; ++rr) m(rr, c) = rng.uniform(-r, r);
            }
        }
        if (spec_.use_lstm) vec(lstm_b_[1]).setConstant(1.0);
    }

    // Everything the backward pass needs from one batched forward. Columns
    // are samples.
    struct BatchCache {
        Matrix x;                    // input
        Matrix fc1;                  // post-ReLU
        std::vector<Matrix> trunk;   // post-ReLU per layer
        Matrix h_in, c_in;
        Matrix gi, gf, gg, go;       // post-activation gates
        Matrix c_new, tanh_c;
        Matrix h_new;                // LSTM output (or dense replacement, post-ReLU)
    };

    // q-value estimates for a batch; hidden successors written to h_out/c_out
    // when given. For !use_lstm networks the hidden state is carried along
    // unchanged.
    Matrix forward_batch(const Matrix& x, const Matrix& h_in, const Matrix& c_in,
                         Matrix* h_out = nullptr, Matrix* c_out = nullptr,
                         BatchCache* cache = nullptr) const {
        assert(x.rows() == spec_.input_width());
        const auto B = x.cols();

        Matrix fc1(spec_.fc1_width(), B);
        int in_off = 0;
        for (std::size_t b = 0; b < spec_.block_widths.size(); ++b) {
            const int w = spec_.block_widths[b];
            const int sw = spec_.subset_width;
            fc1.middleRows(b * sw, sw).noalias() =
                mat(fc1_w_[b]) * x.middleRows(in_off, w);
            fc1.middleRows(b * sw, sw).colwise() += vec(fc1_b_[b]);
            in_off += w;
        }
        fc1 = fc1.cwiseMax(0.0);

        std::vector<Matrix> trunk;
        trunk.reserve(spec_.trunk_widths.size());
        const Matrix* prev = &fc1;
        for (std::size_t i = 0; i < spec_.trunk_widths.size(); ++i) {
            Matrix a = mat(trunk_w_[i]) * (*prev);
            a.colwise() += vec(trunk_b_[i]);
            trunk.push_back(a.cwiseMax(0.0));
            prev = &trunk.back();
        }

        Matrix h_new;
        Matrix gi, gf, gg, go, c_new, tanh_c;
        if (spec_.use_lstm) {
            gi = gate(0, *prev, h_in);
            gf = gate(1, *prev, h_in);
            gg = gate(2, *prev, h_in);
            go = gate(3, *prev, h_in);
            gi = sigmoid(gi);
            gf = sigmoid(gf);
            gg = gg.array().tanh();
            go = sigmoid(go);
            c_new = gf.cwiseProduct(c_in) + gi.cwiseProduct(gg);
            tanh_c = c_new.array().tanh();
            h_new = go.cwiseProduct(tanh_c);
        } else {
            h_new = mat(dense_w_) * (*prev);
            h_new.colwise() += vec(dense_b_);
            h_new = h_new.cwiseMax(0.0);
        }

        Matrix q = mat(head_w_) * h_new;
        q.colwise() += vec(head_b_);

        if (h_out) *h_out = spec_.use_lstm ? h_new : h_in;
        if (c_out) *c_out = spec_.use_lstm ? c_new : c_in;
        if (cache) {
            cache->x = x;
            cache->fc1 = std::move(fc1);
            cache->trunk = std::move(trunk);
            cache->h_in = h_in;
            cache->c_in = c_in;
            if (spec_.use_lstm) {
                cache->gi = std::move(gi);
                cache->gf = std::move(gf);
                cache->gg = std::move(gg);
                cache->go = std::move(go);
                cache->c_new = std::move(c_new);
                cache->tanh_c = std::move(tanh_c);
            }
            cache->h_new = h_new;
        }
        return q;
    }

    // Single decision step.
    Vector forward(const Vector& x, const HiddenState& state, HiddenState* next = nullptr) const {
        Matrix h_out, c_out;
        Matrix q = forward_batch(x, state.h, state.c, next ? &h_out : nullptr,
                                 next ? &c_out : nullptr);
        if (next) {
            next->h = h_out.col(0);
            next->c = c_out.col(0);
        }
        return q.col(0);
    }

    // Accumulate d(loss)/d(theta) into grads given d(loss)/d(q). Recurrence is
    // truncated at the stored step: the incoming hidden state is a constant.
    void backward_batch(const BatchCache& cache, const Matrix& dq,
                        std::span<double> grads) const {
        assert(static_cast<int>(grads.size()) == param_count_);
        auto gmat = [&](int e) {
            return MatMap(grads.data() + entries_[e].offset, entries_[e].rows, entries_[e].cols);
        };

        gmat(head_w_).noalias() += dq * cache.h_new.transpose();
        gmat(head_b_).noalias() += dq.rowwise().sum();
        Matrix dh = mat(head_w_).transpose() * dq;

        Matrix dtrunk_out;  // gradient flowing into the last trunk activation
        const Matrix& lstm_x = trunk_input(cache);
        if (spec_.use_lstm) {
            Matrix dgo = dh.cwiseProduct(cache.tanh_c);
            Matrix dc = dh.cwiseProduct(cache.go).cwiseProduct(
                (1.0 - cache.tanh_c.array().square()).matrix());
            Matrix dgi = dc.cwiseProduct(cache.gg);
            Matrix dgf = dc.cwiseProduct(cache.c_in);
            Matrix dgg = dc.cwiseProduct(cache.gi);
            Matrix dzi = dgi.cwiseProduct(sigmoid_deriv(cache.gi));
            Matrix dzf = dgf.cwiseProduct(sigmoid_deriv(cache.gf));
            Matrix dzg = dgg.cwiseProduct((1.0 - cache.gg.array().square()).matrix());
            Matrix dzo = dgo.cwiseProduct(sigmoid_deriv(cache.go));

            dtrunk_out = Matrix::Zero(lstm_x.rows(), lstm_x.cols());
            const Matrix* dz[4] = {&dzi, &dzf, &dzg, &dzo};
            for (int g = 0; g < 4; ++g) {
                gmat(lstm_u_[g]).noalias() += (*dz[g]) * lstm_x.transpose();
                gmat(lstm_r_[g]).noalias() += (*dz[g]) * cache.h_in.transpose();
                gmat(lstm_b_[g]).noalias() += dz[g]->rowwise().sum();
                dtrunk_out.noalias() += mat(lstm_u_[g]).transpose() * (*dz[g]);
            }
        } else {
            Matrix dz = relu_backward(dh, cache.h_new);
            gmat(dense_w_).noalias() += dz * lstm_x.transpose();
            gmat(dense_b_).noalias() += dz.rowwise().sum();
            dtrunk_out = mat(dense_w_).transpose() * dz;
        }

        Matrix da = std::move(dtrunk_out);
        for (int i = static_cast<int>(spec_.trunk_widths.size()) - 1; i >= 0; --i) {
            Matrix dz = relu_backward(da, cache.trunk[i]);
            const Matrix& in = (i == 0) ? cache.fc1 : cache.trunk[i - 1];
            gmat(trunk_w_[i]).noalias() += dz * in.transpose();
            gmat(trunk_b_[i]).noalias() += dz.rowwise().sum();
            da = mat(trunk_w_[i]).transpose() * dz;
        }

        int in_off = 0;
        for (std::size_t b = 0; b < spec_.block_widths.size(); ++b) {
            const int w = spec_.block_widths[b];
            const int sw = spec_.subset_width;
            Matrix dz = relu_backward(da.middleRows(b * sw, sw), cache.fc1.middleRows(b * sw, sw));
            gmat(fc1_w_[b]).noalias() += dz * cache.x.middleRows(in_off, w).transpose();
            gmat(fc1_b_[b]).noalias() += dz.rowwise().sum();
            in_off += w;
        }
    }

private:
    struct Entry {
        int offset, rows, cols;
    };

    int add_entry(int rows, int cols) {
        entries_.push_back({param_count_, rows, cols});
        param_count_ += rows * cols;
        return static_cast<int>(entries_.size()) - 1;
    }

    void build_layout() {
        param_count_ = 0;
        for (int w : spec_.block_widths) {
            fc1_w_.push_back(add_entry(spec_.subset_width, w));
            fc1_b_.push_back(add_entry(spec_.subset_width, 1));
        }
        int prev = spec_.fc1_width();
        for (int w : spec_.trunk_widths) {
            trunk_w_.push_back(add_entry(w, prev));
            trunk_b_.push_back(add_entry(w, 1));
            prev = w;
        }
        if (spec_.use_lstm) {
            for (int g = 0; g < 4; ++g) {  // input, forget, candidate, output
                lstm_u_[g] = add_entry(spec_.lstm_width, prev);
                lstm_r_[g] = add_entry(spec_.lstm_width, spec_.lstm_width);
                lstm_b_[g] = add_entry(spec_.lstm_width, 1);
            }
        } else {
            dense_w_ = add_entry(spec_.lstm_width, prev);
            dense_b_ = add_entry(spec_.lstm_width, 1);
        }
        head_w_ = add_entry(spec_.output_width, spec_.lstm_width);
        head_b_ = add_entry(spec_.output_width, 1);
    }

    ConstMatMap mat(int e) const {
        return ConstMatMap(theta_.data() + entries_[e].offset, entries_[e].rows,
                           entries_[e].cols);
    }
    Eigen::Map<const Vector> vec(int e) const {
        return Eigen::Map<const Vector>(theta_.data() + entries_[e].offset, entries_[e].rows);
    }
    Eigen::Map<Vector> vec(int e) {
        return Eigen::Map<Vector>(theta_.data() + entries_[e].offset, entries_[e].rows);
    }

    Matrix gate(int g, const Matrix& x, const Matrix& h_in) const {
        Matrix z = mat(lstm_u_[g]) * x;
        z.noalias() += mat(lstm_r_[g]) * h_in;
        z.colwise() += vec(lstm_b_[g]);
        return z;
    }

    const Matrix& trunk_input(const BatchCache& cache) const {
        return cache.trunk.empty() ? cache.fc1 : cache.trunk.back();
    }

    static Matrix sigmoid(const Matrix& z) {
        return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    }
    static Matrix sigmoid_deriv(const Matrix& s) {
        return (s.array() * (1.0 - s.array())).matrix();
    }
    static Matrix relu_backward(const Matrix& upstream, const Matrix& post_act) {
        return (post_act.array() > 0.0).select(upstream, Matrix::Zero(upstream.rows(),
                                                                      upstream.cols()));
    }

    NetworkSpec spec_;
    std::vector<Entry> entries_;
    int param_count_ = 0;
    std::vector<double> theta_;

    std::vector<int> fc1_w_, fc1_b_;
    std::vector<int> trunk_w_, trunk_b_;
    int lstm_u_[4] = {-1, -1, -1, -1};
    int lstm_r_[4] = {-1, -1, -1, -1};
    int lstm_b_[4] = {-1, -1, -1, -1};
    int dense_w_ = -1, dense_b_ = -1;
    int head_w_ = -1, head_b_ = -1;
};

}  // namespace routesim::nn
