#pragma once

#include <cstddef>

namespace ich::kernels {

// Geometry of one conv2d call. All tensors are dense row-major doubles:
// input [n, cin, hin, win], kernel [f, cin, kh, kw], output [n, f, hout, wout].
struct ConvShape {
    std::size_t n, cin, hin, win;
    std::size_t f, kh, kw;
    std::size_t stride, pad;
    std::size_t hout, wout;
};

// Serial reference kernels: straightforward loop nests, kept as the baseline
// the OpenMP versions are tested and benchmarked against. Both paths use the
// same per-element accumulation order and produce bit-identical results.
namespace serial {

void conv2d_forward(const ConvShape& s, const double* in, const double* ker, const double* bias,
                    double* out);
void conv2d_backward_input(const ConvShape& s, const double* up, const double* ker,
                           double* in_grad);
void conv2d_backward_kernel(const ConvShape& s, const double* up, const double* in,
                            double* ker_grad);
void conv2d_backward_bias(const ConvShape& s, const double* up, double* bias_grad);

void dense_forward(std::size_t n, std::size_t d, std::size_t k, const double* in, const double* w,
                   const double* b, double* out);
void dense_backward_input(std::size_t n, std::size_t d, std::size_t k, const double* up,
                          const double* w, double* in_grad);
void dense_backward_weight(std::size_t n, std::size_t d, std::size_t k, const double* up,
                           const double* in, double* w_grad);
void dense_backward_bias(std::size_t n, std::size_t k, const double* up, double* b_grad);

void avgpool_forward(std::size_t n, std::size_t c, std::size_t h, std::size_t w,
                     std::size_t window, const double* in, double* out);
void avgpool_backward(std::size_t n, std::size_t c, std::size_t h, std::size_t w,
                      std::size_t window, const double* up, double* in_grad);

}  // namespace serial

// OpenMP kernels: parallel over independent output elements only.
namespace omp {

void conv2d_forward(const ConvShape& s, const double* in, const double* ker, const double* bias,
                    double* out);
void conv2d_backward_input(const ConvShape& s, const double* up, const double* ker,
                           double* in_grad);
void conv2d_backward_kernel(const ConvShape& s, const double* up, const double* in,
                            double* ker_grad);
void conv2d_backward_bias(const ConvShape& s, const double* up, double* bias_grad);

void dense_forward(std::size_t n, std::size_t d, std::size_t k, const double* in, const double* w,
                   const double* b, double* out);
void dense_backward_input(std::size_t n, std::size_t d, std::size_t k, const double* up,
                          const double* w, double* in_grad);
void dense_backward_weight(std::size_t n, std::size_t d, std::size_t k, const double* up,
                           const double* in, double* w_grad);
void dense_backward_bias(std::size_t n, std::size_t k, const double* up, double* b_grad);

void avgpool_forward(std::size_t n, std::size_t c, std::size_t h, std::size_t w,
                     std::size_t window, const double* in, double* out);
void avgpool_backward(std::size_t n, std::size_t c, std::size_t h, std::size_t w,
                      std::size_t window, const double* up, double* in_grad);

}  // namespace omp

}  // namespace ich::kernels
