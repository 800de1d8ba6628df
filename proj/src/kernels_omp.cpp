#include "ich/kernels.hpp"

// OpenMP variants of the serial reference kernels. Work is split only across
// independent output elements; the accumulation order inside each element is
// the same as the serial code, so results are bit-identical for any thread
// count.

namespace ich::kernels::omp {

namespace {
using std::size_t;
using ll = long long;
}  // namespace

void conv2d_forward(const ConvShape& s, const double* in, const double* ker, const double* bias,
                    double* out) {
    const ll pad = static_cast<ll>(s.pad);
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t n = 0; n < s.n; ++n) {
        for (size_t f = 0; f < s.f; ++f) {
            for (size_t oy = 0; oy < s.hout; ++oy) {
                for (size_t ox = 0; ox < s.wout; ++ox) {
                    double acc = bias[f];
                    for (size_t c = 0; c < s.cin; ++c) {
                        for (size_t ky = 0; ky < s.kh; ++ky) {
                            const ll iy = static_cast<ll>(oy * s.stride + ky) - pad;
                            if (iy < 0 || iy >= static_cast<ll>(s.hin)) continue;
                            for (size_t kx = 0; kx < s.kw; ++kx) {
                                const ll ix = static_cast<ll>(ox * s.stride + kx) - pad;
                                if (ix < 0 || ix >= static_cast<ll>(s.win)) continue;
                                acc += in[((n * s.cin + c) * s.hin + iy) * s.win + ix] *
                                       ker[((f * s.cin + c) * s.kh + ky) * s.kw + kx];
                            }
                        }
                    }
                    out[((n * s.f + f) * s.hout + oy) * s.wout + ox] = acc;
                }
            }
        }
    }
}

void conv2d_backward_input(const ConvShape& s, const double* up, const double* ker,
                           double* in_grad) {
    const ll pad = static_cast<ll>(s.pad);
    const ll stride = static_cast<ll>(s.stride);
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t n = 0; n < s.n; ++n) {
        for (size_t c = 0; c < s.cin; ++c) {
            for (size_t iy = 0; iy < s.hin; ++iy) {
                for (size_t ix = 0; ix < s.win; ++ix) {
                    double acc = 0.0;
                    for (size_t f = 0; f < s.f; ++f) {
                        for (size_t ky = 0; ky < s.kh; ++ky) {
                            const ll ty = static_cast<ll>(iy) + pad - static_cast<ll>(ky);
                            if (ty < 0 || ty % stride != 0) continue;
                            const ll oy = ty / stride;
                            if (oy >= static_cast<ll>(s.hout)) continue;
                            for (size_t kx = 0; kx < s.kw; ++kx) {
                                const ll tx = static_cast<ll>(ix) + pad - static_cast<ll>(kx);
                                if (tx < 0 || tx % stride != 0) continue;
                                const ll ox = tx / stride;
                                if (ox >= static_cast<ll>(s.wout)) continue;
                                acc += up[((n * s.f + f) * s.hout + oy) * s.wout + ox] *
                                       ker[((f * s.cin + c) * s.kh + ky) * s.kw + kx];
                            }
                        }
                    }
                    in_grad[((n * s.cin + c) * s.hin + iy) * s.win + ix] = acc;
                }
            }
        }
    }
}

void conv2d_backward_kernel(const ConvShape& s, const double* up, const double* in,
                            double* ker_grad) {
    const ll pad = static_cast<ll>(s.pad);
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t f = 0; f < s.f; ++f) {
        for (size_t c = 0; c < s.cin; ++c) {
            for (size_t ky = 0; ky < s.kh; ++ky) {
                for (size_t kx = 0; kx < s.kw; ++kx) {
                    double acc = 0.0;
                    for (size_t n = 0; n < s.n; ++n) {
                        for (size_t oy = 0; oy < s.hout; ++oy) {
                            const ll iy = static_cast<ll>(oy * s.stride + ky) - pad;
                            if (iy < 0 || iy >= static_cast<ll>(s.hin)) continue;
                            for (size_t ox = 0; ox < s.wout; ++ox) {
                                const ll ix = static_cast<ll>(ox * s.stride + kx) - pad;
                                if (ix < 0 || ix >= static_cast<ll>(s.win)) continue;
                                acc += up[((n * s.f + f) * s.hout + oy) * s.wout + ox] *
                                       in[((n * s.cin + c) * s.hin + iy) * s.win + ix];
                            }
                        }
                    }
                    ker_grad[((f * s.cin + c) * s.kh + ky) * s.kw + kx] = acc;
                }
            }
        }
    }
}

void conv2d_backward_bias(const ConvShape& s, const double* up, double* bias_grad) {
#pragma omp parallel for schedule(static)
    for (size_t f = 0; f < s.f; ++f) {
        double acc = 0.0;
        for (size_t n = 0; n < s.n; ++n) {
            for (size_t oy = 0; oy < s.hout; ++oy) {
                for (size_t ox = 0; ox < s.wout; ++ox) {
                    acc += up[((n * s.f + f) * s.hout + oy) * s.wout + ox];
                }
            }
        }
        bias_grad[f] = acc;
    }
}

void dense_forward(size_t n, size_t d, size_t k, const double* in, const double* w,
                   const double* b, double* out) {
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) {
            double acc = b[j];
            for (size_t t = 0; t < d; ++t) acc += in[i * d + t] * w[t * k + j];
            out[i * k + j] = acc;
        }
    }
}

void dense_backward_input(size_t n, size_t d, size_t k, const double* up, const double* w,
                          double* in_grad) {
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t i = 0; i < n; ++i) {
        for (size_t t = 0; t < d; ++t) {
            double acc = 0.0;
            for (size_t j = 0; j < k; ++j) acc += up[i * k + j] * w[t * k + j];
            in_grad[i * d + t] = acc;
        }
    }
}

void dense_backward_weight(size_t n, size_t d, size_t k, const double* up, const double* in,
                           double* w_grad) {
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t t = 0; t < d; ++t) {
        for (size_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (size_t i = 0; i < n; ++i) acc += in[i * d + t] * up[i * k + j];
            w_grad[t * k + j] = acc;
        }
    }
}

void dense_backward_bias(size_t n, size_t k, const double* up, double* b_grad) {
#pragma omp parallel for schedule(static)
    for (size_t j = 0; j < k; ++j) {
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) acc += up[i * k + j];
        b_grad[j] = acc;
    }
}

void avgpool_forward(size_t n, size_t c, size_t h, size_t w, size_t window, const double* in,
                     double* out) {
    const size_t ho = h / window, wo = w / window;
    const double denom = static_cast<double>(window * window);
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t i = 0; i < n; ++i) {
        for (size_t ch = 0; ch < c; ++ch) {
            for (size_t oy = 0; oy < ho; ++oy) {
                for (size_t ox = 0; ox < wo; ++ox) {
                    double acc = 0.0;
                    for (size_t dy = 0; dy < window; ++dy) {
                        for (size_t dx = 0; dx < window; ++dx) {
                            acc += in[((i * c + ch) * h + oy * window + dy) * w + ox * window + dx];
                        }
                    }
                    out[((i * c + ch) * ho + oy) * wo + ox] = acc / denom;
                }
            }
        }
    }
}

void avgpool_backward(size_t n, size_t c, size_t h, size_t w, size_t window, const double* up,
                      double* in_grad) {
    const size_t ho = h / window, wo = w / window;
    const double denom = static_cast<double>(window * window);
#pragma omp parallel for collapse(2) schedule(static)
    for (size_t i = 0; i < n; ++i) {
        for (size_t ch = 0; ch < c; ++ch) {
            for (size_t iy = 0; iy < h; ++iy) {
                for (size_t ix = 0; ix < w; ++ix) {
                    in_grad[((i * c + ch) * h + iy) * w + ix] =
                        up[((i * c + ch) * ho + iy / window) * wo + ix / window] / denom;
                }
            }
        }
    }
}

}  // namespace ich::kernels::omp
