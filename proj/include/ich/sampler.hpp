#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ich/augment.hpp"
#include "ich/dataset.hpp"
#include "ich/tensor.hpp"

namespace ich {

inline constexpr std::size_t kBlockLen = 7;

/// Indices of the 7 consecutive slices centered on `center`, with
/// out-of-range neighbors replaced by the nearest valid index.
std::array<std::size_t, kBlockLen> block_indices(std::size_t n_slices, std::size_t center);

struct SliceBlock {
    std::string study_id;
    std::size_t center_index = 0;
    std::array<std::size_t, kBlockLen> member_indices{};
};

SliceBlock block_for(const CtStudy& study, std::size_t slice_idx);

/// A batch of blocks: images [B*7, 3, H, W] with blocks contiguous, the 4th
/// row of each block being the center slice.
struct Batch {
    Tensor images;
    Tensor slice_labels;   // [B*7, 6]
    Tensor center_labels;  // [B, 6]
    std::vector<SliceBlock> blocks;

    std::size_t block_count() const { return blocks.size(); }
};

/// One uniform draw of `blocks_per_batch` distinct (study, slice) pairs,
/// assembled into a batch. Augmentation parameters are drawn once per block.
Batch sample_batch(const Dataset& dataset, Rng& rng, std::size_t blocks_per_batch = 16,
                   const AugmentConfig& aug = AugmentConfig::disabled());

/// Streams one epoch: every (study, slice) pair appears exactly once as a
/// block center, in an order shuffled from (seed, epoch). Deterministic.
class EpochSampler {
public:
    EpochSampler(const Dataset& dataset, std::uint64_t seed, std::uint64_t epoch,
                 std::size_t blocks_per_batch, const AugmentConfig& aug, bool training);

    std::optional<Batch> next();
    std::size_t batches_per_epoch() const;

private:
    const Dataset& dataset_;
    std::uint64_t seed_;
    std::uint64_t epoch_;
    std::size_t blocks_per_batch_;
    AugmentConfig aug_;
    bool training_;
    std::vector<std::pair<std::size_t, std::size_t>> order_;  // (study idx, slice idx)
    std::size_t pos_ = 0;
    std::size_t block_counter_ = 0;
};

std::size_t steps_per_epoch(const Dataset& dataset, std::size_t blocks_per_batch);

}  // namespace ich
