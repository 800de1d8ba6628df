#include "ich/nn.hpp"

#include <cmath>
#include <numbers>

#include "ich/kernels.hpp"
#include "ich/runtime.hpp"

namespace ich {

namespace {

kernels::ConvShape make_conv_shape(const Tensor& input, const Tensor& kernel, const Tensor& bias,
                                   std::size_t stride, std::size_t padding) {
    if (input.rank() != 4) {
        throw ShapeError("conv2d: input must be [N,C,H,W], got " + shape_to_string(input.shape()));
    }
    if (kernel.rank() != 4) {
        throw ShapeError("conv2d: kernel must be [F,C,kh,kw], got " +
                         shape_to_string(kernel.shape()));
    }
    if (input.dim(1) != kernel.dim(1)) {
        throw ShapeError("conv2d: input channels " + std::to_string(input.dim(1)) +
                         " != kernel channels " + std::to_string(kernel.dim(1)));
    }
    if (bias.rank() != 1 || bias.dim(0) != kernel.dim(0)) {
        throw ShapeError("conv2d: bias must be [F=" + std::to_string(kernel.dim(0)) + "], got " +
                         shape_to_string(bias.shape()));
    }
    if (stride == 0) throw ConfigError("conv2d: stride must be >= 1");

    kernels::ConvShape s{};
    s.n = input.dim(0);
    s.cin = input.dim(1);
    s.hin = input.dim(2);
    s.win = input.dim(3);
    s.f = kernel.dim(0);
    s.kh = kernel.dim(2);
    s.kw = kernel.dim(3);
    s.stride = stride;
    s.pad = padding;

    const long long hnum = static_cast<long long>(s.hin) + 2 * static_cast<long long>(padding) -
                           static_cast<long long>(s.kh);
    const long long wnum = static_cast<long long>(s.win) + 2 * static_cast<long long>(padding) -
                           static_cast<long long>(s.kw);
    if (hnum < 0 || wnum < 0 || hnum % static_cast<long long>(stride) != 0 ||
        wnum % static_cast<long long>(stride) != 0) {
        throw ConfigError("conv2d: output extent (" + std::to_string(s.hin) + "+2*" +
                          std::to_string(padding) + "-" + std::to_string(s.kh) + ")/" +
                          std::to_string(stride) + "+1 is not a positive integer");
    }
    s.hout = static_cast<std::size_t>(hnum / static_cast<long long>(stride)) + 1;
    s.wout = static_cast<std::size_t>(wnum / static_cast<long long>(stride)) + 1;
    return s;
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, const Tensor& kernel, const Tensor& bias,
                      std::size_t stride, std::size_t padding) {
    const auto s = make_conv_shape(input, kernel, bias, stride, padding);
    Tensor out({s.n, s.f, s.hout, s.wout});
    if (parallel_kernels_enabled()) {
        kernels::omp::conv2d_forward(s, input.data(), kernel.data(), bias.data(), out.data());
    } else {
        kernels::serial::conv2d_forward(s, input.data(), kernel.data(), bias.data(), out.data());
    }
    return out;
}

ConvGrads conv2d_backward(const Tensor& upstream, const Tensor& input, const Tensor& kernel,
                          std::size_t stride, std::size_t padding) {
    Tensor bias_dummy({kernel.dim(0)});
    const auto s = make_conv_shape(input, kernel, bias_dummy, stride, padding);
    const std::vector<std::size_t> want{s.n, s.f, s.hout, s.wout};
    if (upstream.shape() != want) {
        throw ShapeError("conv2d_backward: upstream shape " + shape_to_string(upstream.shape()) +
                         " != forward output shape " + shape_to_string(want));
    }
    ConvGrads g{Tensor(input.shape()), Tensor(kernel.shape()), Tensor({s.f})};
    if (parallel_kernels_enabled()) {
        kernels::omp::conv2d_backward_input(s, upstream.data(), kernel.data(),
                                            g.input_grad.data());
        kernels::omp::conv2d_backward_kernel(s, upstream.data(), input.data(),
                                             g.kernel_grad.data());
        kernels::omp::conv2d_backward_bias(s, upstream.data(), g.bias_grad.data());
    } else {
        kernels::serial::conv2d_backward_input(s, upstream.data(), kernel.data(),
                                               g.input_grad.data());
        kernels::serial::conv2d_backward_kernel(s, upstream.data(), input.data(),
                                                g.kernel_grad.data());
        kernels::serial::conv2d_backward_bias(s, upstream.data(), g.bias_grad.data());
    }
    return g;
}

Tensor dense_forward(const Tensor& input, const Tensor& weight, const Tensor& bias) {
    if (input.rank() != 2 || weight.rank() != 2) {
        throw ShapeError("dense: input must be [N,D] and weight [D,K], got " +
                         shape_to_string(input.shape()) + " and " +
                         shape_to_string(weight.shape()));
    }
    if (input.dim(1) != weight.dim(0)) {
        throw ShapeError("dense: input D=" + std::to_string(input.dim(1)) + " != weight D=" +
                         std::to_string(weight.dim(0)));
    }
    if (bias.rank() != 1 || bias.dim(0) != weight.dim(1)) {
        throw ShapeError("dense: bias must be [K=" + std::to_string(weight.dim(1)) + "], got " +
                         shape_to_string(bias.shape()));
    }
    const std::size_t n = input.dim(0), d = input.dim(1), k = weight.dim(1);
    Tensor out({n, k});
    if (parallel_kernels_enabled()) {
        kernels::omp::dense_forward(n, d, k, input.data(), weight.data(), bias.data(), out.data());
    } else {
        kernels::serial::dense_forward(n, d, k, input.data(), weight.data(), bias.data(),
                                       out.data());
    }
    return out;
}

DenseGrads dense_backward(const Tensor& upstream, const Tensor& input, const Tensor& weight) {
    const std::size_t n = input.dim(0), d = input.dim(1), k = weight.dim(1);
    const std::vector<std::size_t> want{n, k};
    if (upstream.shape() != want) {
        throw ShapeError("dense_backward: upstream shape " + shape_to_string(upstream.shape()) +
                         " != forward output shape " + shape_to_string(want));
    }
    DenseGrads g{Tensor({n, d}), Tensor({d, k}), Tensor({k})};
    if (parallel_kernels_enabled()) {
        kernels::omp::dense_backward_input(n, d, k, upstream.data(), weight.data(),
                                           g.input_grad.data());
        kernels::omp::dense_backward_weight(n, d, k, upstream.data(), input.data(),
                                            g.weight_grad.data());
        kernels::omp::dense_backward_bias(n, k, upstream.data(), g.bias_grad.data());
    } else {
        kernels::serial::dense_backward_input(n, d, k, upstream.data(), weight.data(),
                                              g.input_grad.data());
        kernels::serial::dense_backward_weight(n, d, k, upstream.data(), input.data(),
                                               g.weight_grad.data());
        kernels::serial::dense_backward_bias(n, k, upstream.data(), g.bias_grad.data());
    }
    return g;
}

Tensor relu(const Tensor& t) {
    Tensor out(t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i] > 0.0 ? t[i] : 0.0;
    return out;
}

Tensor relu_backward(const Tensor& upstream, const Tensor& input) {
    require_same_shape(upstream, input, "relu_backward");
    Tensor out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > 0.0 ? upstream[i] : 0.0;
    return out;
}

Tensor sigmoid(const Tensor& t) {
    Tensor out(t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = t[i];
        if (x >= 0.0) {
            out[i] = 1.0 / (1.0 + std::exp(-x));
        } else {
            const double e = std::exp(x);
            out[i] = e / (1.0 + e);
        }
    }
    return out;
}

Tensor sigmoid_backward(const Tensor& upstream, const Tensor& sigmoid_output) {
    require_same_shape(upstream, sigmoid_output, "sigmoid_backward");
    Tensor out(sigmoid_output.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double s = sigmoid_output[i];
        out[i] = upstream[i] * s * (1.0 - s);
    }
    return out;
}

Tensor avgpool2d(const Tensor& input, std::size_t window) {
    if (input.rank() != 4) {
        throw ShapeError("avgpool2d: input must be [N,C,H,W], got " +
                         shape_to_string(input.shape()));
    }
    if (window == 0) throw ConfigError("avgpool2d: window must be >= 1");
    const std::size_t h = input.dim(2), w = input.dim(3);
    if (h % window != 0 || w % window != 0) {
        throw ConfigError("avgpool2d: extents " + std::to_string(h) + "x" + std::to_string(w) +
                          " not divisible by window " + std::to_string(window));
    }
    Tensor out({input.dim(0), input.dim(1), h / window, w / window});
    if (parallel_kernels_enabled()) {
        kernels::omp::avgpool_forward(input.dim(0), input.dim(1), h, w, window, input.data(),
                                      out.data());
    } else {
        kernels::serial::avgpool_forward(input.dim(0), input.dim(1), h, w, window, input.data(),
                                         out.data());
    }
    return out;
}

Tensor avgpool2d_backward(const Tensor& upstream, std::size_t window, std::size_t h_in,
                          std::size_t w_in) {
    Tensor grad({upstream.dim(0), upstream.dim(1), h_in, w_in});
    if (parallel_kernels_enabled()) {
        kernels::omp::avgpool_backward(upstream.dim(0), upstream.dim(1), h_in, w_in, window,
                                       upstream.data(), grad.data());
    } else {
        kernels::serial::avgpool_backward(upstream.dim(0), upstream.dim(1), h_in, w_in, window,
                                          upstream.data(), grad.data());
    }
    return grad;
}

Tensor global_avg_pool(const Tensor& input) {
    if (input.rank() != 4) {
        throw ShapeError("global_avg_pool: input must be [N,C,H,W], got " +
                         shape_to_string(input.shape()));
    }
    const std::size_t n = input.dim(0), c = input.dim(1), h = input.dim(2), w = input.dim(3);
    const double denom = static_cast<double>(h * w);
    Tensor out({n, c});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            double acc = 0.0;
            const double* p = input.data() + (i * c + ch) * h * w;
            for (std::size_t j = 0; j < h * w; ++j) acc += p[j];
            out.at(i, ch) = acc / denom;
        }
    }
    return out;
}

Tensor global_avg_pool_backward(const Tensor& upstream, std::size_t h, std::size_t w) {
    const std::size_t n = upstream.dim(0), c = upstream.dim(1);
    const double denom = static_cast<double>(h * w);
    Tensor grad({n, c, h, w});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            const double g = upstream.at(i, ch) / denom;
            double* p = grad.data() + (i * c + ch) * h * w;
            for (std::size_t j = 0; j < h * w; ++j) p[j] = g;
        }
    }
    return grad;
}

BceResult bce_with_logits(const Tensor& logits, const Tensor& targets,
                          const Tensor& class_weights) {
    require_same_shape(logits, targets, "bce_with_logits");
    if (logits.rank() != 2) {
        throw ShapeError("bce_with_logits: logits must be [N,C], got " +
                         shape_to_string(logits.shape()));
    }
    const std::size_t n = logits.dim(0), c = logits.dim(1);
    if (class_weights.rank() != 1 || class_weights.dim(0) != c) {
        throw ShapeError("bce_with_logits: class_weights must be [C=" + std::to_string(c) +
                         "], got " + shape_to_string(class_weights.shape()));
    }
    double wsum = 0.0;
    for (std::size_t j = 0; j < c; ++j) wsum += class_weights[j];
    if (std::abs(wsum - 1.0) > 1e-9) {
        throw ConfigError("bce_with_logits: class weights sum to " + std::to_string(wsum) +
                          ", expected 1");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0.0 || targets[i] > 1.0) {
            throw ValidationError("bce_with_logits: target outside [0,1] at flat index " +
                                  std::to_string(i));
        }
    }

    // Per element: w * (max(x,0) - x*y + log(1 + exp(-|x|))), averaged over rows.
    BceResult res{0.0, Tensor(logits.shape())};
    const double inv_n = 1.0 / static_cast<double>(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double x = logits.at(i, j);
            const double y = targets.at(i, j);
            const double w = class_weights[j];
            const double loss = (x > 0.0 ? x : 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
            total += w * loss;
            const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                                      : std::exp(x) / (1.0 + std::exp(x));
            res.logit_grad.at(i, j) = w * (s - y) * inv_n;
        }
    }
    res.loss = total * inv_n;
    return res;
}

// ---- ParamSet ---------------------------------------------------------------

Tensor& ParamSet::add(const std::string& name, Tensor t) {
    if (params_.count(name)) throw ConfigError("ParamSet: duplicate parameter \"" + name + "\"");
    return params_.emplace(name, std::move(t)).first->second;
}

Tensor& ParamSet::param(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("ParamSet: unknown parameter \"" + name + "\"");
    return it->second;
}

const Tensor& ParamSet::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("ParamSet: unknown parameter \"" + name + "\"");
    return it->second;
}

Tensor& ParamSet::grad(const std::string& name) {
    auto it = grads_.find(name);
    if (it != grads_.end()) return it->second;
    const Tensor& p = param(name);
    return grads_.emplace(name, Tensor(p.shape())).first->second;
}

const Tensor& ParamSet::grad(const std::string& name) const {
    auto it = grads_.find(name);
    if (it == grads_.end()) {
        throw ConfigError("ParamSet: missing gradient for parameter \"" + name + "\"");
    }
    return it->second;
}

void ParamSet::accumulate_grad(const std::string& name, const Tensor& g) {
    Tensor& dst = grad(name);
    require_same_shape(dst, g, "accumulate_grad");
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i];
}

void ParamSet::zero_grads() {
    for (auto& [name, g] : grads_) g.fill(0.0);
}

std::vector<std::string> ParamSet::names() const {
    std::vector<std::string> out;
    out.reserve(params_.size());
    for (const auto& [name, t] : params_) out.push_back(name);
    return out;
}

std::size_t ParamSet::total_elements() const {
    std::size_t n = 0;
    for (const auto& [name, t] : params_) n += t.size();
    return n;
}

double ParamSet::grad_norm() const {
    double acc = 0.0;
    for (const auto& [name, g] : grads_) {
        for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * g[i];
    }
    return std::sqrt(acc);
}

// ---- Adam -------------------------------------------------------------------

void adam_step(ParamSet& params, AdamState& state, double lr) {
    for (const auto& name : params.names()) {
        if (!params.has_grad(name)) {
            throw ConfigError("adam_step: missing gradient for parameter \"" + name + "\"");
        }
    }
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(state.cfg.beta2, t);
    for (const auto& name : params.names()) {
        Tensor& p = params.param(name);
        const Tensor& g = params.grad(name);
        Tensor& m = state.m.try_emplace(name, Tensor(p.shape())).first->second;
        Tensor& v = state.v.try_emplace(name, Tensor(p.shape())).first->second;
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = state.cfg.beta1 * m[i] + (1.0 - state.cfg.beta1) * g[i];
            v[i] = state.cfg.beta2 * v[i] + (1.0 - state.cfg.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= lr * mhat / (std::sqrt(vhat) + state.cfg.epsilon);
        }
    }
}

double cosine_lr(std::size_t step, const LrSchedule& schedule) {
    if (schedule.total_steps == 0) throw ConfigError("cosine_lr: total_steps must be >= 1");
    if (schedule.min_lr < 0.0 || schedule.min_lr > schedule.initial_lr) {
        throw ConfigError("cosine_lr: need 0 <= min_lr <= initial_lr");
    }
    if (step > schedule.total_steps) {
        throw RangeError("cosine_lr: step " + std::to_string(step) + " out of range [0, " +
                         std::to_string(schedule.total_steps) + "]");
    }
    const double frac = static_cast<double>(step) / static_cast<double>(schedule.total_steps);
    return schedule.min_lr + 0.5 * (schedule.initial_lr - schedule.min_lr) *
                                 (1.0 + std::cos(std::numbers::pi * frac));
}

void kaiming_uniform_fill(Tensor& t, std::size_t fan_in, Rng& rng) {
    if (fan_in == 0) throw ConfigError("kaiming_uniform_fill: fan_in must be >= 1");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = uniform(rng, -limit, limit);
}

// ---- gradcheck ----------------------------------------------------------------

GradcheckReport gradcheck(const std::function<double(const ParamSet&)>& loss_fn,
                          const ParamSet& params, double eps, double denom_floor) {
    struct Entry {
        std::string name;
        std::size_t index;
    };
    std::vector<Entry> entries;
    for (const auto& name : params.names()) {
        const std::size_t n = params.param(name).size();
        for (std::size_t i = 0; i < n; ++i) entries.push_back({name, i});
    }

    GradcheckReport report;
    const bool par = parallel_kernels_enabled();
#pragma omp parallel if (par)
    {
        ParamSet local = params;
        GradcheckReport best;
#pragma omp for schedule(static) nowait
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const auto& [name, idx] = entries[e];
            Tensor& p = local.param(name);
            const double saved = p[idx];
            p[idx] = saved + eps;
            const double up = loss_fn(local);
            p[idx] = saved - eps;
            const double down = loss_fn(local);
            p[idx] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double analytic = params.grad(name)[idx];
            const double denom =
                std::max({std::abs(analytic), std::abs(numeric), denom_floor});
            const double rel = std::abs(analytic - numeric) / denom;
            if (rel > best.max_rel_error) {
                best = {rel, name, idx, analytic, numeric};
            }
        }
#pragma omp critical
        {
            if (best.max_rel_error > report.max_rel_error) report = best;
        }
    }
    return report;
}

}  // namespace ich
