#include "ich/augment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace ich {

void AugmentConfig::validate() const {
    if (flip_prob < 0.0 || flip_prob > 1.0) {
        throw ConfigError("augment: flip_prob must be in [0,1]");
    }
    if (cutmix_prob < 0.0 || cutmix_prob > 1.0) {
        throw ConfigError("augment: cutmix_prob must be in [0,1]");
    }
    if (noise_sigma < 0.0) throw ConfigError("augment: noise_sigma must be >= 0");
    if (cutmix_alpha <= 0.0) throw ConfigError("augment: cutmix_alpha must be > 0");
    if (crop_scale_min <= 0.0 || crop_scale_min > crop_scale_max || crop_scale_max > 1.0) {
        throw ConfigError("augment: need 0 < crop_scale_min <= crop_scale_max <= 1");
    }
    if (rotate_max_deg < 0.0) throw ConfigError("augment: rotate_max_deg must be >= 0");
    if (distort_max_scale < 0.0 || distort_max_scale >= 1.0) {
        throw ConfigError("augment: distort_max_scale must be in [0,1)");
    }
}

namespace {

double bilinear_sample(const double* ch, std::size_t h, std::size_t w, double y, double x) {
    const double fy = std::floor(y);
    const double fx = std::floor(x);
    const long long y0 = static_cast<long long>(fy);
    const long long x0 = static_cast<long long>(fx);
    const double dy = y - fy;
    const double dx = x - fx;
    double acc = 0.0;
    for (int oy = 0; oy <= 1; ++oy) {
        for (int ox = 0; ox <= 1; ++ox) {
            const long long yy = y0 + oy;
            const long long xx = x0 + ox;
            if (yy < 0 || yy >= static_cast<long long>(h) || xx < 0 ||
                xx >= static_cast<long long>(w)) {
                continue;  // constant-zero outside
            }
            const double wy = oy ? dy : 1.0 - dy;
            const double wx = ox ? dx : 1.0 - dx;
            acc += wy * wx * ch[static_cast<std::size_t>(yy) * w + static_cast<std::size_t>(xx)];
        }
    }
    return acc;
}

WindowedImage resample(const WindowedImage& img,
                       const std::function<void(double, double, double&, double&)>& inverse_map) {
    WindowedImage out;
    out.height = img.height;
    out.width = img.width;
    out.values.resize(img.values.size());
    for (std::size_t c = 0; c < 3; ++c) {
        const double* src = img.channel(c);
        double* dst = out.channel(c);
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                double sy, sx;
                inverse_map(static_cast<double>(y), static_cast<double>(x), sy, sx);
                dst[y * img.width + x] = bilinear_sample(src, img.height, img.width, sy, sx);
            }
        }
    }
    return out;
}

WindowedImage crop_resize(const WindowedImage& img, std::size_t y0, std::size_t x0,
                          std::size_t ch, std::size_t cw) {
    const double sy_scale = static_cast<double>(ch) / static_cast<double>(img.height);
    const double sx_scale = static_cast<double>(cw) / static_cast<double>(img.width);
    return resample(img, [&](double y, double x, double& sy, double& sx) {
        sy = static_cast<double>(y0) + (y + 0.5) * sy_scale - 0.5;
        sx = static_cast<double>(x0) + (x + 0.5) * sx_scale - 0.5;
    });
}

WindowedImage hflip(const WindowedImage& img) {
    WindowedImage out;
    out.height = img.height;
    out.width = img.width;
    out.values.resize(img.values.size());
    for (std::size_t c = 0; c < 3; ++c) {
        const double* src = img.channel(c);
        double* dst = out.channel(c);
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                dst[y * img.width + x] = src[y * img.width + (img.width - 1 - x)];
            }
        }
    }
    return out;
}

WindowedImage rotate_deg(const WindowedImage& img, double angle_deg) {
    const double a = angle_deg * std::numbers::pi / 180.0;
    const double ca = std::cos(a), sa = std::sin(a);
    const double cy = 0.5 * static_cast<double>(img.height - 1);
    const double cx = 0.5 * static_cast<double>(img.width - 1);
    return resample(img, [&](double y, double x, double& sy, double& sx) {
        const double ry = y - cy, rx = x - cx;
        sy = cy + ca * ry - sa * rx;
        sx = cx + sa * ry + ca * rx;
    });
}

WindowedImage scale_about_center(const WindowedImage& img, double scale) {
    const double cy = 0.5 * static_cast<double>(img.height - 1);
    const double cx = 0.5 * static_cast<double>(img.width - 1);
    const double inv = 1.0 / scale;
    return resample(img, [&](double y, double x, double& sy, double& sx) {
        sy = cy + (y - cy) * inv;
        sx = cx + (x - cx) * inv;
    });
}

}  // namespace

AugmentParams draw_augment_params(Rng& rng, const AugmentConfig& cfg, std::size_t h,
                                  std::size_t w) {
    cfg.validate();
    AugmentParams p;
    if (cfg.crop) {
        const double s = uniform(rng, cfg.crop_scale_min, cfg.crop_scale_max);
        std::size_t chh = static_cast<std::size_t>(std::lround(s * static_cast<double>(h)));
        std::size_t cww = static_cast<std::size_t>(std::lround(s * static_cast<double>(w)));
        chh = std::max<std::size_t>(1, std::min(chh, h));
        cww = std::max<std::size_t>(1, std::min(cww, w));
        p.do_crop = true;
        p.crop_h = chh;
        p.crop_w = cww;
        p.crop_y0 = static_cast<std::size_t>(uniform_index(rng, h - chh + 1));
        p.crop_x0 = static_cast<std::size_t>(uniform_index(rng, w - cww + 1));
    }
    if (cfg.flip) p.do_flip = uniform01(rng) < cfg.flip_prob;
    if (cfg.rotate) {
        p.do_rotate = true;
        p.angle_deg = uniform(rng, -cfg.rotate_max_deg, cfg.rotate_max_deg);
    }
    if (cfg.distort) {
        p.do_distort = true;
        p.scale = uniform(rng, 1.0 - cfg.distort_max_scale, 1.0 + cfg.distort_max_scale);
    }
    if (cfg.noise) {
        p.do_noise = true;
        p.sigma = cfg.noise_sigma;
        p.noise_seed = rng();
    }
    return p;
}

WindowedImage apply_augment(const WindowedImage& img, const AugmentParams& p) {
    WindowedImage out = img;
    if (p.do_crop && !(p.crop_h == img.height && p.crop_w == img.width && p.crop_y0 == 0 &&
                       p.crop_x0 == 0)) {
        out = crop_resize(out, p.crop_y0, p.crop_x0, p.crop_h, p.crop_w);
    }
    if (p.do_flip) out = hflip(out);
    if (p.do_rotate && p.angle_deg != 0.0) out = rotate_deg(out, p.angle_deg);
    if (p.do_distort && p.scale != 1.0) out = scale_about_center(out, p.scale);
    if (p.do_noise && p.sigma > 0.0) {
        Rng noise_rng = make_rng(p.noise_seed);
        for (double& v : out.values) {
            v += normal(noise_rng, 0.0, p.sigma);
            if (v < 0.0) v = 0.0;
            if (v > 1.0) v = 1.0;
        }
    }
    return out;
}

std::pair<WindowedImage, LabelVec> augment(const WindowedImage& img, const LabelVec& label,
                                           Rng& rng, const AugmentConfig& cfg) {
    for (double v : label) {
        if (v < 0.0 || v > 1.0) throw ValidationError("augment: label entry outside [0,1]");
    }
    const AugmentParams p = draw_augment_params(rng, cfg, img.height, img.width);
    return {apply_augment(img, p), label};
}

CutMixBox cutmix_box_from_lambda(double lambda, Rng& rng, std::size_t h, std::size_t w) {
    if (lambda < 0.0) lambda = 0.0;
    if (lambda > 1.0) lambda = 1.0;
    const double r = std::sqrt(1.0 - lambda);
    CutMixBox box;
    box.h = static_cast<std::size_t>(std::lround(r * static_cast<double>(h)));
    box.w = static_cast<std::size_t>(std::lround(r * static_cast<double>(w)));
    if (box.h > 0 && box.w > 0) {
        box.y0 = static_cast<std::size_t>(uniform_index(rng, h - box.h + 1));
        box.x0 = static_cast<std::size_t>(uniform_index(rng, w - box.w + 1));
    }
    box.lambda_adj = 1.0 - static_cast<double>(box.h * box.w) / static_cast<double>(h * w);
    return box;
}

CutMixBox draw_cutmix_box(Rng& rng, double alpha, std::size_t h, std::size_t w) {
    if (alpha <= 0.0) throw ConfigError("cutmix: alpha must be > 0");
    const double lambda = beta_sample(rng, alpha, alpha);
    return cutmix_box_from_lambda(lambda, rng, h, w);
}

void apply_cutmix_image(WindowedImage& a, const WindowedImage& b, const CutMixBox& box) {
    if (a.height != b.height || a.width != b.width) {
        throw ShapeError("cutmix: image shapes differ (" + std::to_string(a.height) + "x" +
                         std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                         std::to_string(b.width) + ")");
    }
    for (std::size_t c = 0; c < 3; ++c) {
        double* dst = a.channel(c);
        const double* src = b.channel(c);
        for (std::size_t y = box.y0; y < box.y0 + box.h; ++y) {
            for (std::size_t x = box.x0; x < box.x0 + box.w; ++x) {
                dst[y * a.width + x] = src[y * a.width + x];
            }
        }
    }
}

LabelVec mix_labels(const LabelVec& a, const LabelVec& b, double lambda_adj) {
    LabelVec out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = lambda_adj * a[i] + (1.0 - lambda_adj) * b[i];
    return out;
}

std::pair<WindowedImage, LabelVec> cutmix(const std::pair<WindowedImage, LabelVec>& a,
                                          const std::pair<WindowedImage, LabelVec>& b, Rng& rng,
                                          double alpha) {
    const CutMixBox box = draw_cutmix_box(rng, alpha, a.first.height, a.first.width);
    auto out = a;
    apply_cutmix_image(out.first, b.first, box);
    out.second = mix_labels(a.second, b.second, box.lambda_adj);
    return out;
}

}  // namespace ich
