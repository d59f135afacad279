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
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "qgan/datapipe.hpp"
#include "qgan/error.hpp"
#include "qgan/training.hpp"

namespace qgan::cli {

/// Bad or conflicting configuration. The message names the key.
class ConfigError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

/// Flat key=value settings shared by train and bounds. Values start at their
/// defaults, then a config file, then command flags, then --set overrides.
class RunConfig {
  public:
    RunConfig();

    /// Every accepted key, sorted.
    [[nodiscard]] static std::vector<std::string> keys();

    /// Throws ConfigError naming `key` when it is unknown.
    void set(const std::string &key, const std::string &value);
    /// Parses "key=value".
    void assign(const std::string &assignment);
    /// One assignment per line; blank lines and '#' comments are skipped.
    void merge_file(const std::filesystem::path &path);

    [[nodiscard]] bool is_set(const std::string &key) const;
    [[nodiscard]] const std::string &get(const std::string &key) const;
    [[nodiscard]] std::size_t get_size(const std::string &key) const;
    [[nodiscard]] std::uint64_t get_u64(const std::string &key) const;
    [[nodiscard]] double get_double(const std::string &key) const;
    [[nodiscard]] bool get_bool(const std::string &key) const;

    /// Parsed `classes` list; empty keeps every label.
    [[nodiscard]] std::set<int> classes() const;
    /// Training knobs, validated.
    [[nodiscard]] TrainConfig train_config() const;

    [[nodiscard]] const std::map<std::string, std::string> &values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
    std::set<std::string> explicit_;
};

enum class Arch { kIqgan, kQugan, kProduct };
[[nodiscard]] Arch parse_arch(const std::string &name);
[[nodiscard]] const char *arch_name(Arch a);

/// How images become generator-register states.
enum class Encoding { kPcaAngle, kPixelAngle, kAmplitude };
[[nodiscard]] Encoding parse_encoding(const std::string &name);
[[nodiscard]] const char *encoding_name(Encoding e);

/// Everything needed to rebuild a trained generator and render it.
struct SavedModel {
    Arch arch = Arch::kIqgan;
    Encoding encoding = Encoding::kPcaAngle;
    std::size_t qubits = 0;
    std::size_t depth = 0;
    std::string topology = "chain";
    double angle_scale = 0.0;
    bool trainable_encoder = false;
    std::string noise = "none";
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> params;       // generator (IQGAN: plus encoder offsets)
    std::vector<double> disc_params;  // QuGAN only
    std::optional<PcaModel> pca;
    std::map<std::string, std::string> config;

    [[nodiscard]] std::string to_json() const;
    static SavedModel from_json(const std::string &text);
    static SavedModel load(const std::filesystem::path &path);
};

/// Generator output decoded to pixels in [0, 1]. QuGAN models with input
/// noise use one noise draw from `seed`.
[[nodiscard]] Image render_model(const SavedModel &model, std::uint64_t seed = 0);

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// code: 0 on success, 1 on a runtime error, 2 on a usage error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace qgan::cli
