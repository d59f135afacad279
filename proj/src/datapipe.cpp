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
#include "qgan/datapipe.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "qgan/random.hpp"

namespace qgan {

namespace {

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write '" + path.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw FormatError("short write to '" + path.string() + "'");
    }
}

std::uint32_t read_be32(const std::string &b, std::size_t at) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v = (v << 8) | static_cast<unsigned char>(b[at + i]);
    }
    return v;
}

template <typename T> void put_le(std::string &out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
    }
}

template <typename T> T get_le(const std::string &b, std::size_t &at) {
    if (at + sizeof(T) > b.size()) {
        throw FormatError("dataset container: truncated");
    }
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<T>(static_cast<unsigned char>(b[at + i])) << (8 * i);
    }
    at += sizeof(T);
    return v;
}

std::pair<std::size_t, std::size_t> guess_shape(std::size_t d) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
    if (side * side == d) {
        return {side, side};
    }
    return {d, 1};
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.pop_back();
    }
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
        ++i;
    }
    return s.substr(i);
}

template <typename T> bool parse_number(std::string_view cell, T &out) {
    while (!cell.empty() && cell.front() == ' ') {
        cell.remove_prefix(1);
    }
    while (!cell.empty() && cell.back() == ' ') {
        cell.remove_suffix(1);
    }
    const auto *end = cell.data() + cell.size();
    const auto res = std::from_chars(cell.data(), end, out);
    return res.ec == std::errc() && res.ptr == end && !cell.empty();
}

} // namespace

void ImageDataset::validate() const {
    if (labels.size() != images.size()) {
        throw InvalidArgument("dataset: " + std::to_string(images.size()) + " images but " +
                              std::to_string(labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != width * height) {
            throw InvalidArgument("dataset: image " + std::to_string(i) + " has " +
                                  std::to_string(images[i].size()) + " pixels, expected " +
                                  std::to_string(width * height));
        }
        for (double p : images[i]) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw InvalidArgument("dataset: image " + std::to_string(i) +
                                      " has a pixel outside [0, 1]");
            }
        }
    }
}

// ----------------------------------------------------------------- loaders

ImageDataset load_idx(const std::filesystem::path &images_path,
                      const std::filesystem::path &labels_path) {
    const std::string img = read_file(images_path);
    const std::string lab = read_file(labels_path);
    if (img.size() < 16) {
        throw IdxTruncatedError("idx images: header truncated");
    }
    if (read_be32(img, 0) != 0x00000803) {
        throw IdxMagicError("idx images: bad magic (expected 0x00000803)");
    }
    if (lab.size() < 8) {
        throw IdxTruncatedError("idx labels: header truncated");
    }
    if (read_be32(lab, 0) != 0x00000801) {
        throw IdxMagicError("idx labels: bad magic (expected 0x00000801)");
    }
    const std::size_t n = read_be32(img, 4);
    const std::size_t rows = read_be32(img, 8);
    const std::size_t cols = read_be32(img, 12);
    const std::size_t n_labels = read_be32(lab, 4);
    if (n != n_labels) {
        throw IdxCountMismatchError("idx: " + std::to_string(n) + " images but " +
                                    std::to_string(n_labels) + " labels");
    }
    if (img.size() < 16 + n * rows * cols) {
        throw IdxTruncatedError("idx images: expected " + std::to_string(n * rows * cols) +
                                " pixel bytes, file has " + std::to_string(img.size() - 16));
    }
    if (lab.size() < 8 + n) {
        throw IdxTruncatedError("idx labels: expected " + std::to_string(n) + " label bytes");
    }
    ImageDataset ds;
    ds.width = cols;
    ds.height = rows;
    ds.images.resize(n, Image(rows * cols));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < rows * cols; ++p) {
            ds.images[i][p] = static_cast<unsigned char>(img[16 + i * rows * cols + p]) / 255.0;
        }
        ds.labels.push_back(static_cast<unsigned char>(lab[8 + i]));
    }
    return ds;
}

ImageDataset parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    double maxval = 0.0;
    bool header_checked = false;
    std::size_t columns = 0;
    std::vector<std::vector<double>> raw;
    std::vector<int> labels;
    double observed_max = 0.0;

    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto pos = line.find("maxval:");
            if (pos != std::string::npos) {
                if (!parse_number(std::string_view(line).substr(pos + 7), maxval) ||
                    !(maxval > 0.0)) {
                    throw FormatError("csv line " + std::to_string(lineno) + ": bad maxval");
                }
            }
            continue;
        }
        if (!header_checked) {
            header_checked = true;
            if (line.rfind("label", 0) == 0) {
                continue;
            }
        }
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() < 2) {
            throw FormatError("csv line " + std::to_string(lineno) + ": needs a label and pixels");
        }
        if (columns == 0) {
            columns = cells.size();
        } else if (cells.size() != columns) {
            throw FormatError("csv line " + std::to_string(lineno) + ": ragged row (" +
                              std::to_string(cells.size()) + " columns, expected " +
                              std::to_string(columns) + ")");
        }
        int label = 0;
        if (!parse_number(cells[0], label)) {
            throw FormatError("csv line " + std::to_string(lineno) + ": non-numeric label '" +
                              std::string(cells[0]) + "'");
        }
        std::vector<double> px(columns - 1);
        for (std::size_t c = 1; c < columns; ++c) {
            if (!parse_number(cells[c], px[c - 1])) {
                throw FormatError("csv line " + std::to_string(lineno) + ", column " +
                                  std::to_string(c) + ": non-numeric cell '" +
                                  std::string(cells[c]) + "'");
            }
            if (px[c - 1] < 0.0) {
                throw FormatError("csv line " + std::to_string(lineno) + ": negative pixel");
            }
            observed_max = std::max(observed_max, px[c - 1]);
        }
        labels.push_back(label);
        raw.push_back(std::move(px));
    }
    if (raw.empty()) {
        throw FormatError("csv: no data rows");
    }
    if (maxval == 0.0) {
        maxval = observed_max <= 16.0 ? 16.0 : 255.0;
    }
    if (observed_max > maxval) {
        throw FormatError("csv: pixel value " + std::to_string(observed_max) +
                          " exceeds maxval " + std::to_string(maxval));
    }
    ImageDataset ds;
    std::tie(ds.width, ds.height) = guess_shape(columns - 1);
    ds.labels = std::move(labels);
    ds.images.reserve(raw.size());
    for (auto &px : raw) {
        for (double &p : px) {
            p /= maxval;
        }
        ds.images.push_back(std::move(px));
    }
    return ds;
}

ImageDataset load_csv(const std::filesystem::path &path) { return parse_csv(read_file(path)); }

void save_dataset(const ImageDataset &ds, const std::filesystem::path &path) {
    ds.validate();
    std::string out = "QGDS";
    put_le<std::uint16_t>(out, 1);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.width));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.height));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.size()));
    for (const auto &img : ds.images) {
        for (double p : img) {
            std::uint64_t bits = 0;
            std::memcpy(&bits, &p, sizeof bits);
            put_le<std::uint64_t>(out, bits);
        }
    }
    for (int l : ds.labels) {
        if (l < 0 || l > 255) {
            throw InvalidArgument("save_dataset: label " + std::to_string(l) + " outside 0..255");
        }
        out.push_back(static_cast<char>(l));
    }
    write_file(path, out);
}

ImageDataset load_dataset(const std::filesystem::path &path) {
    const std::string b = read_file(path);
    if (b.size() < 4 || b.compare(0, 4, "QGDS") != 0) {
        throw FormatError("dataset container '" + path.string() + "': bad magic");
    }
    std::size_t at = 4;
    const auto version = get_le<std::uint16_t>(b, at);
    if (version != 1) {
        throw FormatError("dataset container: unsupported version " + std::to_string(version));
    }
    ImageDataset ds;
    ds.width = get_le<std::uint32_t>(b, at);
    ds.height = get_le<std::uint32_t>(b, at);
    const std::size_t n = get_le<std::uint32_t>(b, at);
    if (b.size() != at + n * ds.pixel_count() * 8 + n) {
        throw FormatError("dataset container: size does not match header");
    }
    ds.images.assign(n, Image(ds.pixel_count()));
    for (auto &img : ds.images) {
        for (double &p : img) {
            const auto bits = get_le<std::uint64_t>(b, at);
            std::memcpy(&p, &bits, sizeof p);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        ds.labels.push_back(static_cast<unsigned char>(b[at++]));
    }
    ds.validate();
    return ds;
}

ImageDataset load_any(const std::filesystem::path &path) {
    const std::string ext = path.extension().string();
    if (ext == ".csv") {
        return load_csv(path);
    }
    if (ext == ".qgds") {
        return load_dataset(path);
    }
    throw InvalidArgument("unrecognised dataset extension '" + ext + "' (expected .csv or .qgds)");
}

// -------------------------------------------------------------- transforms

ImageDataset filter_classes(const ImageDataset &ds, const std::set<int> &keep) {
    ImageDataset out;
    out.width = ds.width;
    out.height = ds.height;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (keep.count(ds.labels[i]) != 0) {
            out.images.push_back(ds.images[i]);
            out.labels.push_back(ds.labels[i]);
        }
    }
    if (out.images.empty()) {
        throw InvalidArgument("filter_classes: no images left after filtering");
    }
    return out;
}

ImageDataset downsample_half(const ImageDataset &ds) {
    if (ds.width % 2 != 0 || ds.height % 2 != 0) {
        throw InvalidArgument("downsample_half: dimensions " + std::to_string(ds.width) + "x" +
                              std::to_string(ds.height) + " are not even");
    }
    ImageDataset out;
    out.width = ds.width / 2;
    out.height = ds.height / 2;
    out.labels = ds.labels;
    for (const auto &img : ds.images) {
        Image small(out.pixel_count());
        for (std::size_t r = 0; r < out.height; ++r) {
            for (std::size_t c = 0; c < out.width; ++c) {
                const std::size_t top = 2 * r * ds.width + 2 * c;
                small[r * out.width + c] =
                    0.25 * (img[top] + img[top + 1] + img[top + ds.width] + img[top + ds.width + 1]);
            }
        }
        out.images.push_back(std::move(small));
    }
    return out;
}

Image class_average(const ImageDataset &ds, int label) {
    Image sum(ds.pixel_count(), 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] == label) {
            for (std::size_t p = 0; p < sum.size(); ++p) {
                sum[p] += ds.images[i][p];
            }
            ++count;
        }
    }
    if (count == 0) {
        throw InvalidArgument("class_average: label " + std::to_string(label) + " not present");
    }
    for (double &p : sum) {
        p /= static_cast<double>(count);
    }
    return sum;
}

ImageDataset take(const ImageDataset &ds, std::size_t count) {
    ImageDataset out;
    out.width = ds.width;
    out.height = ds.height;
    const std::size_t n = std::min(count, ds.size());
    out.images.assign(ds.images.begin(), ds.images.begin() + static_cast<std::ptrdiff_t>(n));
    out.labels.assign(ds.labels.begin(), ds.labels.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

std::vector<FeatureVector> pixel_features(const ImageDataset &ds) {
    std::vector<FeatureVector> out;
    out.reserve(ds.size());
    for (const auto &img : ds.images) {
        out.emplace_back(img);
    }
    return out;
}

// --------------------------------------------------------------------- PCA

PcaModel pca_fit(const ImageDataset &ds, std::size_t k) {
    const std::size_t n = ds.size();
    const std::size_t d = ds.pixel_count();
    if (k < 1 || k > std::min(n, d)) {
        throw InvalidArgument("pca_fit: k = " + std::to_string(k) + " outside [1, " +
                              std::to_string(std::min(n, d)) + "]");
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        if (ds.images[i].size() != d) {
            throw InvalidArgument("pca_fit: ragged images");
        }
        for (std::size_t p = 0; p < d; ++p) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = ds.images[i][p];
        }
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centred = x.rowwise() - mean;
    if (n < 2 || centred.squaredNorm() <= 1e-24) {
        throw InvalidArgument("pca_fit: degenerate data, every image is identical (zero variance)");
    }
    const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(n - 1);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

    PcaModel m;
    m.mean.assign(mean.data(), mean.data() + d);
    for (std::size_t j = 0; j < k; ++j) {
        const auto col = static_cast<Eigen::Index>(d - 1 - j);  // ascending order
        Eigen::VectorXd v = eig.eigenvectors().col(col);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) {
            v = -v;
        }
        m.components.emplace_back(v.data(), v.data() + d);
        m.explained_variance.push_back(std::max(0.0, eig.eigenvalues()(col)));
    }
    m.feature_min.assign(k, std::numeric_limits<double>::infinity());
    m.feature_max.assign(k, -std::numeric_limits<double>::infinity());
    for (const auto &img : ds.images) {
        const auto p = pca_project(m, img);
        for (std::size_t j = 0; j < k; ++j) {
            m.feature_min[j] = std::min(m.feature_min[j], p[j]);
            m.feature_max[j] = std::max(m.feature_max[j], p[j]);
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (m.feature_max[j] - m.feature_min[j] <= 1e-12) {
            std::cerr << "warning: PCA component " << j
                      << " has zero range on the training data; its feature is pinned to 0.5\n";
        }
    }
    return m;
}

std::vector<double> pca_project(const PcaModel &model, std::span<const double> image) {
    if (image.size() != model.d()) {
        throw InvalidArgument("pca: image has " + std::to_string(image.size()) +
                              " pixels, model expects " + std::to_string(model.d()));
    }
    std::vector<double> out(model.k(), 0.0);
    for (std::size_t j = 0; j < model.k(); ++j) {
        double s = 0.0;
        for (std::size_t p = 0; p < model.d(); ++p) {
            s += (image[p] - model.mean[p]) * model.components[j][p];
        }
        out[j] = s;
    }
    return out;
}

FeatureVector pca_transform(const PcaModel &model, std::span<const double> image) {
    std::vector<double> f = pca_project(model, image);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double range = model.feature_max[j] - model.feature_min[j];
        f[j] = range > 1e-12 ? std::clamp((f[j] - model.feature_min[j]) / range, 0.0, 1.0) : 0.5;
    }
    return FeatureVector(std::move(f));
}

Image pca_inverse(const PcaModel &model, std::span<const double> features, bool clamp) {
    if (features.size() != model.k()) {
        throw InvalidArgument("pca_inverse: " + std::to_string(features.size()) +
                              " features, model has " + std::to_string(model.k()) + " components");
    }
    Image img = model.mean;
    for (std::size_t j = 0; j < model.k(); ++j) {
        const double range = model.feature_max[j] - model.feature_min[j];
        const double proj = model.feature_min[j] + (range > 1e-12 ? features[j] * range : 0.0);
        for (std::size_t p = 0; p < img.size(); ++p) {
            img[p] += proj * model.components[j][p];
        }
    }
    if (clamp) {
        for (double &p : img) {
            p = std::clamp(p, 0.0, 1.0);
        }
    }
    return img;
}

Image random_inverse_probe(const PcaModel &model, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> f(model.k());
    double norm2 = 0.0;
    for (double &x : f) {
        x = rng.uniform();
        norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    for (double &x : f) {
        x = norm > 0.0 ? x / norm : 0.0;
    }
    return pca_inverse(model, f);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InvalidArgument("cosine_similarity: length mismatch");
    }
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        return 0.0;
    }
    return ab / std::sqrt(aa * bb);
}

std::string PcaModel::to_json() const {
    nlohmann::json j;
    j["mean"] = mean;
    j["components"] = components;
    j["explained_variance"] = explained_variance;
    j["feature_min"] = feature_min;
    j["feature_max"] = feature_max;
    return j.dump();
}

PcaModel PcaModel::from_json(const std::string &text) {
    PcaModel m;
    try {
        const auto j = nlohmann::json::parse(text);
        j.at("mean").get_to(m.mean);
        j.at("components").get_to(m.components);
        j.at("explained_variance").get_to(m.explained_variance);
        j.at("feature_min").get_to(m.feature_min);
        j.at("feature_max").get_to(m.feature_max);
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(std::string("pca model json: ") + e.what());
    }
    const std::size_t k = m.components.size();
    if (m.explained_variance.size() != k || m.feature_min.size() != k ||
        m.feature_max.size() != k) {
        throw FormatError("pca model json: inconsistent component counts");
    }
    for (const auto &row : m.components) {
        if (row.size() != m.mean.size()) {
            throw FormatError("pca model json: component length differs from mean length");
        }
    }
    return m;
}

// --------------------------------------------------------------------- PGM

PgmImage to_pgm(std::span<const double> image, std::size_t width, std::size_t height) {
    if (image.size() != width * height) {
        throw InvalidArgument("to_pgm: " + std::to_string(image.size()) + " pixels for a " +
                              std::to_string(width) + "x" + std::to_string(height) + " image");
    }
    PgmImage out{width, height, {}};
    out.pixels.reserve(image.size());
    for (double p : image) {
        out.pixels.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(p, 0.0, 1.0) * 255)));
    }
    return out;
}

std::string encode_pgm(const PgmImage &img, bool binary) {
    std::string out = (binary ? "P5\n" : "P2\n") + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    if (binary) {
        out.append(img.pixels.begin(), img.pixels.end());
        return out;
    }
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            out += std::to_string(img.pixels[r * img.width + c]);
            out += c + 1 == img.width ? '\n' : ' ';
        }
    }
    return out;
}

PgmImage decode_pgm(const std::string &bytes) {
    std::size_t at = 0;
    auto next_token = [&]() {
        while (at < bytes.size()) {
            if (bytes[at] == '#') {
                while (at < bytes.size() && bytes[at] != '\n') {
                    ++at;
                }
            } else if (std::isspace(static_cast<unsigned char>(bytes[at]))) {
                ++at;
            } else {
                break;
            }
        }
        const std::size_t start = at;
        while (at < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[at]))) {
            ++at;
        }
        if (start == at) {
            throw FormatError("pgm: unexpected end of data");
        }
        return bytes.substr(start, at - start);
    };
    auto next_int = [&]() {
        const std::string t = next_token();
        std::size_t v = 0;
        if (!parse_number(t, v)) {
            throw FormatError("pgm: bad number '" + t + "'");
        }
        return v;
    };
    const std::string magic = next_token();
    if (magic != "P2" && magic != "P5") {
        throw FormatError("pgm: bad magic '" + magic + "'");
    }
    PgmImage img;
    img.width = next_int();
    img.height = next_int();
    const std::size_t maxval = next_int();
    if (maxval == 0 || maxval > 255) {
        throw FormatError("pgm: unsupported maxval " + std::to_string(maxval));
    }
    const std::size_t n = img.width * img.height;
    img.pixels.resize(n);
    auto rescale = [&](std::size_t v) {
        if (v > maxval) {
            throw FormatError("pgm: sample exceeds maxval");
        }
        return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    };
    if (magic == "P5") {
        ++at;  // single whitespace after maxval
        if (bytes.size() < at + n) {
            throw FormatError("pgm: truncated raster");
        }
        for (std::size_t i = 0; i < n; ++i) {
            img.pixels[i] = rescale(static_cast<unsigned char>(bytes[at + i]));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            img.pixels[i] = rescale(next_int());
        }
    }
    return img;
}

void write_pgm(const std::filesystem::path &path, std::span<const double> image, std::size_t width,
               std::size_t height, bool binary) {
    write_file(path, encode_pgm(to_pgm(image, width, height), binary));
}

PgmImage read_pgm(const std::filesystem::path &path) { return decode_pgm(read_file(path)); }

Image tile_row(std::span<const Image> images, std::size_t width, std::size_t height,
               std::size_t *out_width) {
    if (images.empty()) {
        throw InvalidArgument("tile_row: no images");
    }
    const std::size_t total = images.size() * width + images.size() - 1;
    Image out(total * height, 0.0);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != width * height) {
            throw InvalidArgument("tile_row: image " + std::to_string(i) + " has the wrong size");
        }
        for (std::size_t r = 0; r < height; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                out[r * total + i * (width + 1) + c] = images[i][r * width + c];
            }
        }
    }
    if (out_width != nullptr) {
        *out_width = total;
    }
    return out;
}

} // namespace qgan
