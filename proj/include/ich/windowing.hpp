#pragma once

#include <cstddef>
#include <vector>

#include "ich/errors.hpp"

namespace ich {

/// A CT display window: HU interval [level - width/2, level + width/2]
/// rendered linearly to [0,1] with clamping outside.
struct WindowSpec {
    double level = 0.0;
    double width = 1.0;  // must be > 0
};

inline constexpr WindowSpec kBrainWindow{40.0, 80.0};
inline constexpr WindowSpec kSubduralWindow{75.0, 215.0};
inline constexpr WindowSpec kBoneWindow{600.0, 2800.0};

/// Standard CT rescale: hu = slope * raw + intercept.
double to_hu(double raw_pixel, double slope, double intercept);

/// One axial slice in Hounsfield units, row-major.
struct HuSlice {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;
};

/// Three stacked window channels in fixed order (brain, subdural, bone),
/// each value in [0,1]. Layout [3, H, W] row-major.
struct WindowedImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;

    double* channel(std::size_t c) { return values.data() + c * height * width; }
    const double* channel(std::size_t c) const { return values.data() + c * height * width; }
};

double apply_window_value(double hu, const WindowSpec& w);
std::vector<double> apply_window(const HuSlice& slice, const WindowSpec& w);
WindowedImage compose_channels(const HuSlice& slice);

}  // namespace ich
