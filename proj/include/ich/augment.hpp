#pragma once

#include <array>
#include <cstdint>

#include "ich/rng.hpp"
#include "ich/windowing.hpp"

namespace ich {

using LabelVec = std::array<double, 6>;

struct AugmentConfig {
    bool crop = false;
    double crop_scale_min = 0.8;
    double crop_scale_max = 1.0;
    bool flip = false;
    double flip_prob = 0.5;
    bool rotate = false;
    double rotate_max_deg = 10.0;
    bool distort = false;           // mild affine scale jitter
    double distort_max_scale = 0.1;
    bool noise = false;
    double noise_sigma = 0.02;      // in [0,1] intensity units
    bool cutmix = false;
    double cutmix_alpha = 1.0;
    double cutmix_prob = 0.25;

    void validate() const;
    static AugmentConfig disabled() { return AugmentConfig{}; }
};

/// One concrete draw of augmentation parameters. Drawing once and applying to
/// all 7 slices of a block keeps the block geometrically coherent.
struct AugmentParams {
    bool do_crop = false;
    std::size_t crop_y0 = 0, crop_x0 = 0, crop_h = 0, crop_w = 0;
    bool do_flip = false;
    bool do_rotate = false;
    double angle_deg = 0.0;
    bool do_distort = false;
    double scale = 1.0;
    bool do_noise = false;
    double sigma = 0.0;
    std::uint64_t noise_seed = 0;
};

AugmentParams draw_augment_params(Rng& rng, const AugmentConfig& cfg, std::size_t h,
                                  std::size_t w);
WindowedImage apply_augment(const WindowedImage& img, const AugmentParams& p);

/// Geometric + noise augmentation of a single (image, label) pair; the label
/// passes through unchanged.
std::pair<WindowedImage, LabelVec> augment(const WindowedImage& img, const LabelVec& label,
                                           Rng& rng, const AugmentConfig& cfg);

/// CutMix rectangle. The box is placed fully inside the image, so its area is
/// exact and lambda_adj = 1 - area/(H*W).
struct CutMixBox {
    std::size_t y0 = 0, x0 = 0, h = 0, w = 0;
    double lambda_adj = 1.0;
};

CutMixBox cutmix_box_from_lambda(double lambda, Rng& rng, std::size_t h, std::size_t w);
CutMixBox draw_cutmix_box(Rng& rng, double alpha, std::size_t h, std::size_t w);
void apply_cutmix_image(WindowedImage& a, const WindowedImage& b, const CutMixBox& box);
LabelVec mix_labels(const LabelVec& a, const LabelVec& b, double lambda_adj);

/// Full CutMix of two samples: draw lambda ~ Beta(alpha, alpha), paste the
/// box from b into a, blend labels by the realized area fraction.
std::pair<WindowedImage, LabelVec> cutmix(const std::pair<WindowedImage, LabelVec>& a,
                                          const std::pair<WindowedImage, LabelVec>& b, Rng& rng,
                                          double alpha);

}  // namespace ich
