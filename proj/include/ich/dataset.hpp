#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ich/windowing.hpp"

namespace ich {

// Fixed 6-class order used everywhere: labels, descriptors, predictions.
inline constexpr std::array<const char*, 6> kClassNames = {
    "any", "intraparenchymal", "intraventricular", "subarachnoid", "subdural", "extradural"};

/// An ordered stack of axial HU slices with per-slice 6-way labels.
struct CtStudy {
    std::string study_id;
    double slope = 1.0;
    double intercept = 0.0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::int16_t> raw;  // stored pixel values, slice-major
    std::vector<std::array<int, 6>> labels;

    std::size_t n_slices() const { return labels.size(); }
    HuSlice hu_slice(std::size_t idx) const;
};

// CTV1 volume file: magic "CTV1", u32 n_slices, u32 height, u32 width, then
// n*h*w little-endian int16 stored pixel values, slice-major.
struct VolumeHeader {
    std::uint32_t n_slices = 0;
    std::uint32_t height = 0;
    std::uint32_t width = 0;
};

void write_ctv1(const std::filesystem::path& path, const VolumeHeader& hdr,
                const std::vector<std::int16_t>& data);
VolumeHeader read_ctv1_header(const std::filesystem::path& path);
std::vector<std::int16_t> read_ctv1(const std::filesystem::path& path, VolumeHeader& hdr);

struct StudyRecord {
    std::string study_id;
    std::filesystem::path volume_path;
    double slope = 1.0;
    double intercept = 0.0;
    std::vector<std::array<int, 6>> labels;
    VolumeHeader header;
};

/// A labeled collection of studies described by a JSON manifest. Volume pixel
/// data is loaded lazily on first access and cached; headers are read and
/// validated up front.
class Dataset {
public:
    static Dataset load(const std::filesystem::path& manifest_path);
    /// Builds an in-memory dataset (used by the phantom generator and tests).
    static Dataset from_studies(std::vector<CtStudy> studies);

    std::size_t study_count() const { return records_.size(); }
    const StudyRecord& record(std::size_t idx) const { return records_[idx]; }
    const CtStudy& study(std::size_t idx) const;
    std::size_t total_slices() const;

    /// Throws ConfigError unless every study has the same slice geometry.
    void require_uniform_geometry() const;

private:
    std::vector<StudyRecord> records_;
    mutable std::vector<std::unique_ptr<CtStudy>> cache_;
};

void write_manifest(const std::filesystem::path& path, const std::vector<StudyRecord>& records);

}  // namespace ich
