#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ich/rng.hpp"
#include "ich/tensor.hpp"

namespace ich {

// ---- layer ops ------------------------------------------------------------

/// Cross-correlation of input [N,C,H,W] with kernel [F,C,kh,kw] plus bias [F].
/// Output extents must divide exactly: H' = (H + 2*pad - kh)/stride + 1.
Tensor conv2d_forward(const Tensor& input, const Tensor& kernel, const Tensor& bias,
                      std::size_t stride = 1, std::size_t padding = 0);

struct ConvGrads {
    Tensor input_grad, kernel_grad, bias_grad;
};
ConvGrads conv2d_backward(const Tensor& upstream, const Tensor& input, const Tensor& kernel,
                          std::size_t stride = 1, std::size_t padding = 0);

Tensor dense_forward(const Tensor& input, const Tensor& weight, const Tensor& bias);

struct DenseGrads {
    Tensor input_grad, weight_grad, bias_grad;
};
DenseGrads dense_backward(const Tensor& upstream, const Tensor& input, const Tensor& weight);

Tensor relu(const Tensor& t);
Tensor relu_backward(const Tensor& upstream, const Tensor& input);

Tensor sigmoid(const Tensor& t);
Tensor sigmoid_backward(const Tensor& upstream, const Tensor& sigmoid_output);

/// Non-overlapping window x window average pooling; extents must divide.
Tensor avgpool2d(const Tensor& input, std::size_t window);
Tensor avgpool2d_backward(const Tensor& upstream, std::size_t window, std::size_t h_in,
                          std::size_t w_in);

Tensor global_avg_pool(const Tensor& input);  // [N,C,H,W] -> [N,C]
Tensor global_avg_pool_backward(const Tensor& upstream, std::size_t h, std::size_t w);

/// Mean over rows of the class-weighted binary cross entropy, computed in
/// log space directly from logits. class_weights must sum to 1 (within 1e-9).
/// Targets may be fractional (CutMix), in [0,1].
struct BceResult {
    double loss;
    Tensor logit_grad;
};
BceResult bce_with_logits(const Tensor& logits, const Tensor& targets,
                          const Tensor& class_weights);

// ---- parameters and optimizer ----------------------------------------------

/// Named parameter tensors plus their gradient tensors. Gradient entries are
/// created on first accumulation; shapes always match the parameter.
class ParamSet {
public:
    Tensor& add(const std::string& name, Tensor t);
    Tensor& param(const std::string& name);
    const Tensor& param(const std::string& name) const;
    bool has(const std::string& name) const { return params_.count(name) != 0; }

    bool has_grad(const std::string& name) const { return grads_.count(name) != 0; }
    /// Gradient tensor for a parameter, created zero-filled on first use.
    Tensor& grad(const std::string& name);
    const Tensor& grad(const std::string& name) const;
    void accumulate_grad(const std::string& name, const Tensor& g);

    void zero_grads();

    std::vector<std::string> names() const;
    std::size_t total_elements() const;
    double grad_norm() const;

    const std::map<std::string, Tensor>& all() const { return params_; }

private:
    std::map<std::string, Tensor> params_;
    std::map<std::string, Tensor> grads_;
};

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Per-parameter first/second moment estimates and the shared step counter.
struct AdamState {
    AdamConfig cfg;
    std::map<std::string, Tensor> m, v;
    std::uint64_t step = 0;
};

/// One Adam update with bias correction. Every parameter must have a gradient.
void adam_step(ParamSet& params, AdamState& state, double lr);

struct LrSchedule {
    double initial_lr = 5e-4;
    double min_lr = 0.0;
    std::size_t total_steps = 1;
};

/// Cosine annealing: min + 0.5*(init-min)*(1 + cos(pi*step/total)).
/// Valid for 0 <= step <= total_steps.
double cosine_lr(std::size_t step, const LrSchedule& schedule);

// ---- init -------------------------------------------------------------------

/// Kaiming-uniform with fan-in scaling: U(-sqrt(6/fan_in), +sqrt(6/fan_in)).
void kaiming_uniform_fill(Tensor& t, std::size_t fan_in, Rng& rng);

// ---- gradient checking --------------------------------------------------------

struct GradcheckReport {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
};

/// Compares the analytic gradients stored in `params` against central finite
/// differences of `loss_fn` (which must be a pure function of the parameters).
/// Error metric per element: |a - n| / max(|a|, |n|, denom_floor).
GradcheckReport gradcheck(const std::function<double(const ParamSet&)>& loss_fn,
                          const ParamSet& params, double eps = 1e-5,
                          double denom_floor = 1e-3);

}  // namespace ich
