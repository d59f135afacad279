// Copyright 2026 The qganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file datapipe.hpp
 * Image datasets: loaders (IDX, CSV, a small binary container), class
 * filtering, 2x2 pooling, class means, PCA with [0,1] feature rescaling,
 * and PGM image output.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qgan/embedding.hpp"
#include "qgan/error.hpp"

namespace qgan {

/// Row-major grey-level image with pixels in [0, 1].
using Image = std::vector<double>;

class IdxMagicError : public FormatError {
  public:
    using FormatError::FormatError;
};
class IdxTruncatedError : public FormatError {
  public:
    using FormatError::FormatError;
};
class IdxCountMismatchError : public FormatError {
  public:
    using FormatError::FormatError;
};

struct ImageDataset {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Image> images;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const { return images.size(); }
    [[nodiscard]] std::size_t pixel_count() const { return width * height; }
    /// Throws InvalidArgument when shapes, ranges or label counts disagree.
    void validate() const;
};

/// MNIST-style IDX pair (magics 0x803 / 0x801, big-endian sizes).
[[nodiscard]] ImageDataset load_idx(const std::filesystem::path &images_path,
                                    const std::filesystem::path &labels_path);

/// `label,p0,p1,...` rows. Lines starting with '#' are comments; a comment
/// `# maxval: N` fixes the pixel range, otherwise it is 16 when every pixel
/// is <= 16 and 255 otherwise. An optional header row starting with
/// "label" is skipped. Images are square (side = sqrt(columns)) when the
/// pixel count is a perfect square, otherwise a single row.
[[nodiscard]] ImageDataset load_csv(const std::filesystem::path &path);
[[nodiscard]] ImageDataset parse_csv(const std::string &text);

/// Little-endian container: "QGDS", u16 version, u32 width, height, count,
/// f64 pixels, u8 labels.
void save_dataset(const ImageDataset &ds, const std::filesystem::path &path);
[[nodiscard]] ImageDataset load_dataset(const std::filesystem::path &path);

/// Dispatches on extension: .csv or .qgds.
[[nodiscard]] ImageDataset load_any(const std::filesystem::path &path);

[[nodiscard]] ImageDataset filter_classes(const ImageDataset &ds, const std::set<int> &keep);
[[nodiscard]] ImageDataset downsample_half(const ImageDataset &ds);
[[nodiscard]] Image class_average(const ImageDataset &ds, int label);

/// First `count` images (or all when fewer).
[[nodiscard]] ImageDataset take(const ImageDataset &ds, std::size_t count);

/// Images as feature vectors (for amplitude encoding).
[[nodiscard]] std::vector<FeatureVector> pixel_features(const ImageDataset &ds);

struct PcaModel {
    std::vector<double> mean;
    std::vector<std::vector<double>> components;  // k rows of length d
    std::vector<double> explained_variance;
    std::vector<double> feature_min;
    std::vector<double> feature_max;

    [[nodiscard]] std::size_t k() const { return components.size(); }
    [[nodiscard]] std::size_t d() const { return mean.size(); }

    [[nodiscard]] std::string to_json() const;
    static PcaModel from_json(const std::string &text);
};

/// Top-k principal components of the mean-centred sample covariance
/// (divisor n - 1). Each component's largest-magnitude entry is positive.
[[nodiscard]] PcaModel pca_fit(const ImageDataset &ds, std::size_t k);

/// Raw projection (image - mean) . components^T.
[[nodiscard]] std::vector<double> pca_project(const PcaModel &model, std::span<const double> image);

/// Projection min-max rescaled to [0, 1] with the training range, clamped.
/// A component with zero training range maps to 0.5.
[[nodiscard]] FeatureVector pca_transform(const PcaModel &model, std::span<const double> image);

/// Undoes the rescaling, maps back to pixels and adds the mean. Pixels are
/// clamped to [0, 1] unless `clamp` is false.
[[nodiscard]] Image pca_inverse(const PcaModel &model, std::span<const double> features,
                                bool clamp = true);

/// k uniform draws, scaled to unit Euclidean norm, through pca_inverse.
[[nodiscard]] Image random_inverse_probe(const PcaModel &model, std::uint64_t seed);

[[nodiscard]] double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Grey image with pixel values round(255 x).
struct PgmImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};

[[nodiscard]] PgmImage to_pgm(std::span<const double> image, std::size_t width, std::size_t height);
[[nodiscard]] std::string encode_pgm(const PgmImage &img, bool binary = true);
[[nodiscard]] PgmImage decode_pgm(const std::string &bytes);
void write_pgm(const std::filesystem::path &path, std::span<const double> image, std::size_t width,
               std::size_t height, bool binary = true);
[[nodiscard]] PgmImage read_pgm(const std::filesystem::path &path);

/// Lays images out left to right in a single strip separated by a 1-pixel
/// black gutter.
[[nodiscard]] Image tile_row(std::span<const Image> images, std::size_t width, std::size_t height,
                             std::size_t *out_width);

} // namespace qgan
