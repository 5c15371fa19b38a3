#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "routesim/error.hpp"

namespace routesim::nn {

enum class OptimizerKind { sgd, adam, rmsprop };

inline OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "sgd") return OptimizerKind::sgd;
    if (s == "adam") return OptimizerKind::adam;
    if (s == "rmsprop") return OptimizerKind::rmsprop;
    throw ParseError("unknown optimizer: " + s);
}

inline double default_learning_rate(OptimizerKind kind) {
    return kind == OptimizerKind::sgd ? 1e-2 : 1e-3;
}

// Gradient-descent update rules over flat parameter buffers.
class Optimizer {
public:
    Optimizer(OptimizerKind kind, double alpha)
        : kind_(kind), alpha_(alpha) {}

    OptimizerKind kind() const { return kind_; }
    double learning_rate() const { return alpha_; }

    void step(std::span<double> params, std::span<const double> grads) {
        if (params.size() != grads.size()) throw Error("optimizer shape mismatch");
        switch (kind_) {
            case OptimizerKind::sgd:
                for (std::size_t i = 0; i < params.size(); ++i)
                    params[i] -= alpha_ * grads[i];
                break;
            case OptimizerKind::rmsprop: {
                ensure(acc_, params.size());
                for (std::size_t i = 0; i < params.size(); ++i) {
                    acc_[i] = rho_ * acc_[i] + (1.0 - rho_) * grads[i] * grads[i];
                    params[i] -= alpha_ * grads[i] / std::sqrt(acc_[i] + eps_);
                }
                break;
            }
            case OptimizerKind::adam: {
                ensure(m_, params.size());
                ensure(v_, params.size());
                ++t_;
                const double bc1 = 1.0 - std::pow(beta1_, t_);
                const double bc2 = 1.0 - std::pow(beta2_, t_);
                for (std::size_t i = 0; i < params.size(); ++i) {
                    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
                    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
                    params[i] -= alpha_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
                }
                break;
            }
        }
    }

private:
    static void ensure(std::vector<double>& buf, std::size_t n) {
        if (buf.size() != n) buf.assign(n, 0.0);
    }

    OptimizerKind kind_;
    double alpha_;
    double rho_ = 0.9;      // rmsprop smoothing
    double beta1_ = 0.9;    // adam moments
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    std::vector<double> acc_, m_, v_;
    long t_ = 0;
};

}  // namespace routesim::nn
