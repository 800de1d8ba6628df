#include "ich/sampler.hpp"

#include <algorithm>

namespace ich {

std::array<std::size_t, kBlockLen> block_indices(std::size_t n_slices, std::size_t center) {
    if (center >= n_slices) {
        throw RangeError("block_indices: center " + std::to_string(center) +
                         " out of range for " + std::to_string(n_slices) + " slices");
    }
    std::array<std::size_t, kBlockLen> idx{};
    const long long c = static_cast<long long>(center);
    const long long last = static_cast<long long>(n_slices) - 1;
    for (long long k = -3; k <= 3; ++k) {
        long long j = c + k;
        if (j < 0) j = 0;           // replicate nearest slice at the edges
        if (j > last) j = last;
        idx[static_cast<std::size_t>(k + 3)] = static_cast<std::size_t>(j);
    }
    return idx;
}

SliceBlock block_for(const CtStudy& study, std::size_t slice_idx) {
    SliceBlock b;
    b.study_id = study.study_id;
    b.center_index = slice_idx;
    b.member_indices = block_indices(study.n_slices(), slice_idx);
    return b;
}

namespace {

struct BlockData {
    SliceBlock block;
    std::vector<WindowedImage> images;  // 7 members
    std::vector<LabelVec> labels;
};

LabelVec label_vec(const std::array<int, 6>& lab) {
    LabelVec v;
    for (std::size_t i = 0; i < 6; ++i) v[i] = static_cast<double>(lab[i]);
    return v;
}

BlockData load_block(const Dataset& ds, std::size_t study_idx, std::size_t slice_idx,
                     Rng& block_rng, const AugmentConfig& aug, bool training) {
    const CtStudy& study = ds.study(study_idx);
    BlockData bd;
    bd.block = block_for(study, slice_idx);
    bd.images.reserve(kBlockLen);
    bd.labels.reserve(kBlockLen);

    // One augmentation draw per block, applied identically to all 7 members.
    std::optional<AugmentParams> params;
    if (training) {
        params = draw_augment_params(block_rng, aug, study.height, study.width);
    }
    for (std::size_t m = 0; m < kBlockLen; ++m) {
        const std::size_t si = bd.block.member_indices[m];
        WindowedImage img = compose_channels(study.hu_slice(si));
        if (params) img = apply_augment(img, *params);
        bd.images.push_back(std::move(img));
        bd.labels.push_back(label_vec(study.labels[si]));
    }
    return bd;
}

Batch pack_blocks(std::vector<BlockData> blocks) {
    const std::size_t b = blocks.size();
    const std::size_t h = blocks[0].images[0].height;
    const std::size_t w = blocks[0].images[0].width;
    Batch batch;
    batch.images = Tensor({b * kBlockLen, 3, h, w});
    batch.slice_labels = Tensor({b * kBlockLen, 6});
    batch.center_labels = Tensor({b, 6});
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t m = 0; m < kBlockLen; ++m) {
            const std::size_t row = i * kBlockLen + m;
            const WindowedImage& img = blocks[i].images[m];
            std::copy(img.values.begin(), img.values.end(),
                      batch.images.data() + row * 3 * h * w);
            for (std::size_t c = 0; c < 6; ++c) {
                batch.slice_labels.at(row, c) = blocks[i].labels[m][c];
            }
        }
        for (std::size_t c = 0; c < 6; ++c) {
            batch.center_labels.at(i, c) = blocks[i].labels[3][c];
        }
        batch.blocks.push_back(std::move(blocks[i].block));
    }
    return batch;
}

// Block-level CutMix: one box per chosen block, pasted into all 7 members
// from the corresponding members of a partner block (pre-CutMix snapshot).
void cutmix_blocks(std::vector<BlockData>& blocks, Rng& rng, const AugmentConfig& aug) {
    if (!aug.cutmix || blocks.size() < 2) return;
    const std::vector<BlockData> snapshot = blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (uniform01(rng) >= aug.cutmix_prob) continue;
        std::size_t j = static_cast<std::size_t>(uniform_index(rng, blocks.size() - 1));
        if (j >= i) ++j;
        const auto& src = snapshot[j];
        const CutMixBox box = draw_cutmix_box(rng, aug.cutmix_alpha, blocks[i].images[0].height,
                                              blocks[i].images[0].width);
        for (std::size_t m = 0; m < kBlockLen; ++m) {
            apply_cutmix_image(blocks[i].images[m], src.images[m], box);
            blocks[i].labels[m] = mix_labels(blocks[i].labels[m], src.labels[m], box.lambda_adj);
        }
    }
}

}  // namespace

Batch sample_batch(const Dataset& dataset, Rng& rng, std::size_t blocks_per_batch,
                   const AugmentConfig& aug) {
    if (dataset.study_count() == 0) throw ConfigError("sample_batch: empty dataset");
    if (blocks_per_batch == 0) throw ConfigError("sample_batch: blocks_per_batch must be >= 1");
    dataset.require_uniform_geometry();

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t s = 0; s < dataset.study_count(); ++s) {
        for (std::size_t i = 0; i < dataset.record(s).labels.size(); ++i) pairs.emplace_back(s, i);
    }
    shuffle(pairs, rng);
    const std::size_t take = std::min(blocks_per_batch, pairs.size());

    std::vector<BlockData> blocks;
    for (std::size_t k = 0; k < take; ++k) {
        Rng block_rng = make_rng(rng());
        blocks.push_back(
            load_block(dataset, pairs[k].first, pairs[k].second, block_rng, aug, true));
    }
    cutmix_blocks(blocks, rng, aug);
    return pack_blocks(std::move(blocks));
}

EpochSampler::EpochSampler(const Dataset& dataset, std::uint64_t seed, std::uint64_t epoch,
                           std::size_t blocks_per_batch, const AugmentConfig& aug, bool training)
    : dataset_(dataset),
      seed_(seed),
      epoch_(epoch),
      blocks_per_batch_(blocks_per_batch),
      aug_(aug),
      training_(training) {
    if (dataset.study_count() == 0) throw ConfigError("EpochSampler: empty dataset");
    if (blocks_per_batch == 0) throw ConfigError("EpochSampler: blocks_per_batch must be >= 1");
    dataset.require_uniform_geometry();
    for (std::size_t s = 0; s < dataset.study_count(); ++s) {
        for (std::size_t i = 0; i < dataset.record(s).labels.size(); ++i) {
            order_.emplace_back(s, i);
        }
    }
    Rng rng = derive_rng(seed_, "epoch-order", epoch_);
    shuffle(order_, rng);
}

std::optional<Batch> EpochSampler::next() {
    if (pos_ >= order_.size()) return std::nullopt;
    const std::size_t take = std::min(blocks_per_batch_, order_.size() - pos_);
    std::vector<BlockData> blocks;
    blocks.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
        const auto [study_idx, slice_idx] = order_[pos_ + k];
        Rng block_rng = derive_rng(seed_, "augment", epoch_,
                                   hash64(dataset_.record(study_idx).study_id), slice_idx);
        blocks.push_back(load_block(dataset_, study_idx, slice_idx, block_rng,
                                    training_ ? aug_ : AugmentConfig::disabled(), training_));
    }
    if (training_) {
        Rng cm_rng = derive_rng(seed_, "cutmix", epoch_, block_counter_);
        cutmix_blocks(blocks, cm_rng, aug_);
    }
    pos_ += take;
    block_counter_ += take;
    return pack_blocks(std::move(blocks));
}

std::size_t EpochSampler::batches_per_epoch() const {
    return (order_.size() + blocks_per_batch_ - 1) / blocks_per_batch_;
}

std::size_t steps_per_epoch(const Dataset& dataset, std::size_t blocks_per_batch) {
    const std::size_t n = dataset.total_slices();
    return (n + blocks_per_batch - 1) / blocks_per_batch;
}

}  // namespace ich
