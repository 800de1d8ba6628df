#include "ich/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace ich {

static_assert(std::endian::native == std::endian::little,
              "CTV1 and bundle I/O assume a little-endian host");

HuSlice CtStudy::hu_slice(std::size_t idx) const {
    if (idx >= n_slices()) {
        throw RangeError("hu_slice: index " + std::to_string(idx) + " out of range for study " +
                         study_id + " with " + std::to_string(n_slices()) + " slices");
    }
    HuSlice s;
    s.height = height;
    s.width = width;
    s.values.resize(height * width);
    const std::int16_t* src = raw.data() + idx * height * width;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        s.values[i] = to_hu(static_cast<double>(src[i]), slope, intercept);
    }
    return s;
}

void write_ctv1(const std::filesystem::path& path, const VolumeHeader& hdr,
                const std::vector<std::int16_t>& data) {
    if (data.size() != static_cast<std::size_t>(hdr.n_slices) * hdr.height * hdr.width) {
        throw ShapeError("write_ctv1: data size does not match header for " + path.string());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("write_ctv1: cannot open " + path.string());
    f.write("CTV1", 4);
    f.write(reinterpret_cast<const char*>(&hdr.n_slices), 4);
    f.write(reinterpret_cast<const char*>(&hdr.height), 4);
    f.write(reinterpret_cast<const char*>(&hdr.width), 4);
    f.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(std::int16_t)));
    if (!f) throw IoError("write_ctv1: write failed for " + path.string());
}

namespace {
VolumeHeader read_header_stream(std::ifstream& f, const std::filesystem::path& path) {
    char magic[4];
    VolumeHeader hdr;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&hdr.n_slices), 4);
    f.read(reinterpret_cast<char*>(&hdr.height), 4);
    f.read(reinterpret_cast<char*>(&hdr.width), 4);
    if (!f || std::memcmp(magic, "CTV1", 4) != 0) {
        throw ValidationError("read_ctv1: " + path.string() + " is not a CTV1 volume");
    }
    return hdr;
}
}  // namespace

VolumeHeader read_ctv1_header(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("read_ctv1: cannot open " + path.string());
    return read_header_stream(f, path);
}

std::vector<std::int16_t> read_ctv1(const std::filesystem::path& path, VolumeHeader& hdr) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("read_ctv1: cannot open " + path.string());
    hdr = read_header_stream(f, path);
    std::vector<std::int16_t> data(static_cast<std::size_t>(hdr.n_slices) * hdr.height *
                                   hdr.width);
    f.read(reinterpret_cast<char*>(data.data()),
           static_cast<std::streamsize>(data.size() * sizeof(std::int16_t)));
    if (!f) throw ValidationError("read_ctv1: " + path.string() + " truncated");
    return data;
}

namespace {
std::vector<std::array<int, 6>> parse_labels(const nlohmann::json& j, const std::string& study) {
    std::vector<std::array<int, 6>> labels;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 6) {
            throw ValidationError("manifest: study " + study +
                                  ": label vector must have exactly 6 entries");
        }
        std::array<int, 6> lab{};
        for (std::size_t c = 0; c < 6; ++c) {
            const int v = row[c].get<int>();
            if (v != 0 && v != 1) {
                throw ValidationError("manifest: study " + study + ": labels must be 0 or 1");
            }
            lab[c] = v;
        }
        const int any = lab[1] | lab[2] | lab[3] | lab[4] | lab[5];
        if (lab[0] != any) {
            throw ValidationError("manifest: study " + study +
                                  ": label[any] != OR of the 5 sub-type labels");
        }
        labels.push_back(lab);
    }
    if (labels.empty()) {
        throw ValidationError("manifest: study " + study + ": needs at least one slice");
    }
    return labels;
}
}  // namespace

Dataset Dataset::load(const std::filesystem::path& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw IoError("load_dataset: cannot open manifest " + manifest_path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("load_dataset: manifest " + manifest_path.string() +
                              " is not valid JSON: " + e.what());
    }
    if (!j.is_array()) {
        throw ValidationError("load_dataset: manifest must be a JSON array of study entries");
    }

    const auto base = manifest_path.parent_path();
    Dataset ds;
    for (const auto& entry : j) {
        StudyRecord rec;
        try {
            rec.study_id = entry.at("study_id").get<std::string>();
            rec.volume_path = base / entry.at("volume_file").get<std::string>();
            rec.slope = entry.at("slope").get<double>();
            rec.intercept = entry.at("intercept").get<double>();
            rec.labels = parse_labels(entry.at("labels"), rec.study_id);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("manifest: malformed study entry: " + std::string(e.what()));
        }
        if (!std::filesystem::exists(rec.volume_path)) {
            throw ValidationError("manifest: study " + rec.study_id + ": volume file missing: " +
                                  rec.volume_path.string());
        }
        rec.header = read_ctv1_header(rec.volume_path);
        if (rec.header.n_slices != rec.labels.size()) {
            throw ValidationError("manifest: study " + rec.study_id + ": volume has " +
                                  std::to_string(rec.header.n_slices) + " slices but " +
                                  std::to_string(rec.labels.size()) + " label rows");
        }
        ds.records_.push_back(std::move(rec));
    }
    ds.cache_.resize(ds.records_.size());
    return ds;
}

Dataset Dataset::from_studies(std::vector<CtStudy> studies) {
    Dataset ds;
    for (auto& s : studies) {
        StudyRecord rec;
        rec.study_id = s.study_id;
        rec.slope = s.slope;
        rec.intercept = s.intercept;
        rec.labels = s.labels;
        rec.header = {static_cast<std::uint32_t>(s.n_slices()),
                      static_cast<std::uint32_t>(s.height), static_cast<std::uint32_t>(s.width)};
        ds.records_.push_back(std::move(rec));
        ds.cache_.push_back(std::make_unique<CtStudy>(std::move(s)));
    }
    return ds;
}

const CtStudy& Dataset::study(std::size_t idx) const {
    if (idx >= records_.size()) {
        throw RangeError("Dataset::study: index " + std::to_string(idx) + " out of range");
    }
    if (!cache_[idx]) {
        const StudyRecord& rec = records_[idx];
        auto st = std::make_unique<CtStudy>();
        st->study_id = rec.study_id;
        st->slope = rec.slope;
        st->intercept = rec.intercept;
        st->labels = rec.labels;
        VolumeHeader hdr;
        st->raw = read_ctv1(rec.volume_path, hdr);
        st->height = hdr.height;
        st->width = hdr.width;
        if (hdr.n_slices != rec.labels.size()) {
            throw ValidationError("Dataset: study " + rec.study_id +
                                  ": volume header changed since manifest load");
        }
        cache_[idx] = std::move(st);
    }
    return *cache_[idx];
}

std::size_t Dataset::total_slices() const {
    std::size_t n = 0;
    for (const auto& rec : records_) n += rec.labels.size();
    return n;
}

void Dataset::require_uniform_geometry() const {
    for (std::size_t i = 1; i < records_.size(); ++i) {
        if (records_[i].header.height != records_[0].header.height ||
            records_[i].header.width != records_[0].header.width) {
            throw ConfigError("dataset: mixed slice geometry (study " + records_[i].study_id +
                              " is " + std::to_string(records_[i].header.height) + "x" +
                              std::to_string(records_[i].header.width) + ", study " +
                              records_[0].study_id + " is " +
                              std::to_string(records_[0].header.height) + "x" +
                              std::to_string(records_[0].header.width) + ")");
        }
    }
}

void write_manifest(const std::filesystem::path& path, const std::vector<StudyRecord>& records) {
    nlohmann::json j = nlohmann::json::array();
    const auto base = path.parent_path();
    for (const auto& rec : records) {
        nlohmann::json labels = nlohmann::json::array();
        for (const auto& lab : rec.labels) labels.push_back(lab);
        j.push_back({{"study_id", rec.study_id},
                     {"volume_file", std::filesystem::relative(rec.volume_path, base).string()},
                     {"slope", rec.slope},
                     {"intercept", rec.intercept},
                     {"labels", labels}});
    }
    std::ofstream f(path);
    if (!f) throw IoError("write_manifest: cannot open " + path.string());
    f << j.dump(1) << "\n";
    if (!f) throw IoError("write_manifest: write failed for " + path.string());
}

}  // namespace ich
