#include "ich/tensor.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace ich {

namespace {
std::atomic<bool> g_checked{false};

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t p = 1;
    for (std::size_t d : shape) p *= d;
    return p;
}
}  // namespace

void set_checked_mode(bool on) { g_checked.store(on); }
bool checked_mode() { return g_checked.load(); }

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), values_(shape_product(shape_), fill) {}

Tensor Tensor::from_values(std::vector<std::size_t> shape, std::vector<double> values) {
    if (shape_product(shape) != values.size()) {
        throw ShapeError("tensor construction: shape " + shape_to_string(shape) + " implies " +
                         std::to_string(shape_product(shape)) + " values, got " +
                         std::to_string(values.size()));
    }
    if (checked_mode()) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) {
                throw ValidationError("tensor construction: non-finite value at flat index " +
                                      std::to_string(i));
            }
        }
    }
    Tensor t;
    t.shape_ = std::move(shape);
    t.values_ = std::move(values);
    return t;
}

void Tensor::fill(double v) {
    for (double& x : values_) x = v;
}

Tensor Tensor::reshaped(std::vector<std::size_t> new_shape) const {
    if (shape_product(new_shape) != values_.size()) {
        throw ShapeError("reshape: " + shape_to_string(shape_) + " -> " +
                         shape_to_string(new_shape) + " changes element count");
    }
    Tensor t;
    t.shape_ = std::move(new_shape);
    t.values_ = values_;
    return t;
}

std::string shape_to_string(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* context) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(context) + ": shape mismatch " +
                         shape_to_string(a.shape()) + " vs " + shape_to_string(b.shape()));
    }
}

}  // namespace ich
