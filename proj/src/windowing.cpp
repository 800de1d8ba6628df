#include "ich/windowing.hpp"

#include <cmath>
#include <cstdio>

#include "ich/tensor.hpp"

namespace ich {

double to_hu(double raw_pixel, double slope, double intercept) {
    if (slope == 0.0) throw ConfigError("to_hu: rescale slope must be nonzero");
    return slope * raw_pixel + intercept;
}

double apply_window_value(double hu, const WindowSpec& w) {
    const double lo = w.level - w.width / 2.0;
    double v = (hu - lo) / w.width;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

std::vector<double> apply_window(const HuSlice& slice, const WindowSpec& w) {
    if (w.width <= 0.0) throw ConfigError("apply_window: window width must be > 0");
    std::vector<double> out(slice.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = apply_window_value(slice.values[i], w);
    return out;
}

WindowedImage compose_channels(const HuSlice& slice) {
    if (checked_mode()) {
        for (double v : slice.values) {
            if (v < -1024.0 || v > 3071.0) {
                std::fprintf(stderr, "warning: HU value %g outside typical clinical range\n", v);
                break;
            }
        }
    }
    WindowedImage img;
    img.height = slice.height;
    img.width = slice.width;
    img.values.resize(3 * slice.height * slice.width);
    const WindowSpec windows[3] = {kBrainWindow, kSubduralWindow, kBoneWindow};
    for (std::size_t c = 0; c < 3; ++c) {
        double* dst = img.channel(c);
        for (std::size_t i = 0; i < slice.values.size(); ++i) {
            dst[i] = apply_window_value(slice.values[i], windows[c]);
        }
    }
    return img;
}

}  // namespace ich
