#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ich/errors.hpp"

namespace ich {

/// Enables extra input validation (finiteness of tensor values, HU range
/// warnings). Off by default; tests and `ich verify` switch it on.
void set_checked_mode(bool on);
bool checked_mode();

/// Dense row-major tensor of 64-bit floats.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);

    /// Builds a tensor from explicit values. Always checks that
    /// product(shape) == values.size(); rejects NaN/Inf in checked mode.
    static Tensor from_values(std::vector<std::size_t> shape, std::vector<double> values);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t i) const { return shape_[i]; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    // Row-major index helpers for the common ranks.
    double& at(std::size_t i, std::size_t j) { return values_[i * shape_[1] + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * shape_[1] + j]; }
    double& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) {
        return values_[((n * shape_[1] + c) * shape_[2] + y) * shape_[3] + x];
    }
    double at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
        return values_[((n * shape_[1] + c) * shape_[2] + y) * shape_[3] + x];
    }

    void fill(double v);

    /// Same storage reinterpreted under a new shape (sizes must agree).
    Tensor reshaped(std::vector<std::size_t> new_shape) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

std::string shape_to_string(const std::vector<std::size_t>& shape);

/// Throws ShapeError with a descriptive message unless both shapes agree.
void require_same_shape(const Tensor& a, const Tensor& b, const char* context);

}  // namespace ich
