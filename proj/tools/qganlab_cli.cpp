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
#include "qganlab_cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgan/bounds.hpp"
#include "qgan/embedding.hpp"
#include "qgan/models.hpp"
#include "qgan/toycompare.hpp"

namespace qgan::cli {

namespace {

using Json = nlohmann::ordered_json;

// Dense density matrices stop being practical past this register width.
constexpr std::size_t kMaxBoundsQubits = 10;
// One qubit per pixel; the statevector doubles with each.
constexpr std::size_t kMaxPixelAngleQubits = 12;

const std::map<std::string, std::string> &defaults() {
    static const std::map<std::string, std::string> d = {
        {"angle_scale", "3.141592653589793"},
        {"arch", "iqgan"},
        {"batch_size", "1"},
        {"beta1", "0.9"},
        {"beta2", "0.999"},
        {"classes", ""},
        {"dataset", ""},
        {"depth", "2"},
        {"disc_steps", "1"},
        {"downsample", "false"},
        {"embedding", "auto"},
        {"epochs", "10"},
        {"eps", "1e-08"},
        {"gen_steps", "1"},
        {"generator_loss", "nonsaturating"},
        {"init_scale", "0.1"},
        {"log_every", "40"},
        {"lr", "0.01"},
        {"max_samples", "0"},
        {"noise", "none"},
        {"optimizer", "adam"},
        {"pca", "4"},
        {"qubits", "0"},
        {"raw", "false"},
        {"readout", "rescaled"},
        {"save_images", "true"},
        {"seed", "0"},
        {"topology", "chain"},
        {"trainable_encoder", "false"},
    };
    return d;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ConfigError bad_value(const std::string &key, const std::string &what, const std::string &got) {
    return ConfigError("config key '" + key + "': expected " + what + ", got '" + got + "'");
}

std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write '" + path.string() + "'");
    }
    out << text;
}

void save_pgm(const std::filesystem::path &path, std::span<const double> image, std::size_t width,
              std::size_t height) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    write_pgm(path, image, width, height);
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t q = 0;
    while ((std::size_t{1} << q) < n) {
        ++q;
    }
    return std::max<std::size_t>(q, 1);
}

OptimizerKind parse_optimizer(const std::string &s) {
    if (s == "adam") {
        return OptimizerKind::kAdam;
    }
    if (s == "sgd") {
        return OptimizerKind::kSgd;
    }
    throw bad_value("optimizer", "adam or sgd", s);
}

GeneratorLoss parse_generator_loss(const std::string &s) {
    if (s == "nonsaturating") {
        return GeneratorLoss::kNonSaturating;
    }
    if (s == "saturating") {
        return GeneratorLoss::kSaturating;
    }
    throw bad_value("generator_loss", "nonsaturating or saturating", s);
}

SwapReadout parse_readout(const std::string &s) {
    if (s == "rescaled") {
        return SwapReadout::kRescaled;
    }
    if (s == "raw") {
        return SwapReadout::kRaw;
    }
    throw bad_value("readout", "rescaled or raw", s);
}

// ------------------------------------------------------------ data prep

ImageDataset load_with_context(const std::filesystem::path &path) {
    try {
        return load_any(path);
    } catch (const FormatError &e) {
        throw FormatError("dataset '" + path.string() + "': " + e.what());
    }
}

/// Loads, filters and optionally downsamples the configured dataset.
ImageDataset configured_dataset(const RunConfig &cfg) {
    const std::string &path = cfg.get("dataset");
    if (path.empty()) {
        throw ConfigError("config key 'dataset': no dataset given (use --dataset)");
    }
    ImageDataset ds = load_with_context(path);
    const auto keep = cfg.classes();
    if (!keep.empty()) {
        ds = filter_classes(ds, keep);
    }
    if (cfg.get_bool("downsample")) {
        ds = downsample_half(ds);
    }
    return ds;
}

Encoding resolve_encoding(const RunConfig &cfg, Arch arch) {
    const std::string &emb = cfg.get("embedding");
    if (emb != "auto" && emb != "angle" && emb != "amplitude") {
        throw bad_value("embedding", "auto, angle or amplitude", emb);
    }
    const std::size_t k = cfg.get_size("pca");
    const bool raw = cfg.get_bool("raw");
    if (arch == Arch::kProduct) {
        if (cfg.is_set("pca") && k > 0) {
            throw ConfigError("config conflict: pca=" + std::to_string(k) +
                              " cannot be used with arch=product; the product generator "
                              "reads raw pixels");
        }
        if (emb == "amplitude") {
            throw ConfigError(
                "config conflict: embedding=amplitude cannot be used with arch=product");
        }
        return Encoding::kPixelAngle;
    }
    if (raw && cfg.is_set("pca") && k > 0) {
        throw ConfigError("config conflict: raw=true cannot be combined with pca=" +
                          std::to_string(k));
    }
    if (!raw && k > 0) {
        if (emb == "amplitude") {
            throw ConfigError("config conflict: embedding=amplitude cannot be combined with pca=" +
                              std::to_string(k) + "; PCA features are angle-embedded");
        }
        return Encoding::kPcaAngle;
    }
    return emb == "angle" ? Encoding::kPixelAngle : Encoding::kAmplitude;
}

std::size_t register_width(Encoding e, std::size_t k, std::size_t pixels) {
    switch (e) {
    case Encoding::kPcaAngle:
        return k;
    case Encoding::kPixelAngle:
        return pixels;
    case Encoding::kAmplitude:
        return ceil_log2(pixels);
    }
    return 0;
}

FeatureVector encode_features(Encoding e, const std::optional<PcaModel> &pca, const Image &img) {
    if (e == Encoding::kPcaAngle) {
        return pca_transform(*pca, img);
    }
    return FeatureVector(img);
}

EmbeddingSpec embedding_of(const SavedModel &m) {
    EmbeddingSpec spec;
    spec.kind = m.encoding == Encoding::kAmplitude ? EmbeddingKind::kAmplitude
                                                   : EmbeddingKind::kAngle;
    spec.n_qubits = m.qubits;
    spec.angle_scale = m.angle_scale;
    return spec;
}

std::size_t pixel_count(const SavedModel &m) { return m.width * m.height; }

/// Register state emitted by the saved generator.
StateVector model_state(const SavedModel &m, std::uint64_t seed) {
    const Topology topo = parse_topology(m.topology);
    switch (m.arch) {
    case Arch::kIqgan: {
        const IqganModel model = make_iqgan(embedding_of(m), m.depth, topo, m.trainable_encoder);
        if (m.params.size() != model.n_params()) {
            throw FormatError("params: expected " + std::to_string(model.n_params()) +
                              " iqgan parameters, found " + std::to_string(m.params.size()));
        }
        return generator_state(model.generator,
                               std::span(m.params).first(model.n_generator_params()));
    }
    case Arch::kQugan: {
        const QuganModel model = make_qugan(embedding_of(m), m.depth, topo);
        if (m.params.size() != model.generator.n_params()) {
            throw FormatError("params: expected " + std::to_string(model.generator.n_params()) +
                              " qugan generator parameters, found " +
                              std::to_string(m.params.size()));
        }
        const NoiseSpec noise = parse_noise(m.noise);
        if (noise.kind == NoiseKind::kNone) {
            return generator_state(model.generator, m.params);
        }
        // Training embeds noise with a full pi rotation per unit, whatever
        // the data encoder's scale.
        Rng rng(seed);
        const FeatureVector z = draw_feature_noise(rng, noise, m.qubits);
        return generator_state(model.generator, m.params, &z, std::numbers::pi);
    }
    case Arch::kProduct: {
        if (m.params.size() > kMaxBoundsQubits) {
            throw InvalidArgument("product generator with " + std::to_string(m.params.size()) +
                                  " pixel qubits is too wide for a dense state (max " +
                                  std::to_string(kMaxBoundsQubits) + ")");
        }
        Circuit c(m.params.size());
        for (std::size_t p = 0; p < m.params.size(); ++p) {
            c.ry(p, std::nullopt, m.params[p]);
        }
        return run(c, {});
    }
    }
    throw InvalidArgument("unknown architecture");
}

Image decode_state(Encoding e, const std::optional<PcaModel> &pca, const StateVector &s,
                   std::size_t pixels, double angle_scale) {
    switch (e) {
    case Encoding::kPcaAngle: {
        const FeatureVector f = marginal_angle_decode(s, angle_scale);
        return pca_inverse(*pca, f.values(), true);
    }
    case Encoding::kPixelAngle: {
        const FeatureVector f = marginal_angle_decode(s, angle_scale);
        return {f.values().begin(), f.values().end()};
    }
    case Encoding::kAmplitude: {
        // Amplitude magnitudes only fix the image up to scale; show it with
        // the brightest pixel at 1.
        Image img = amplitude_decode(s, pixels, 1.0);
        const double peak = *std::max_element(img.begin(), img.end());
        if (peak > 0.0) {
            for (double &v : img) {
                v /= peak;
            }
        }
        return img;
    }
    }
    return {};
}

std::size_t square_side(std::size_t d) {
    const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
    return s * s == d ? s : 0;
}

// ------------------------------------------------------------ commands

struct IngestArgs {
    std::string idx_images;
    std::string idx_labels;
    std::string csv;
    std::string out;
};

void cmd_ingest(const IngestArgs &a, std::ostream &out) {
    ImageDataset ds;
    if (!a.csv.empty()) {
        try {
            ds = load_csv(a.csv);
        } catch (const FormatError &e) {
            throw FormatError("csv '" + a.csv + "': " + e.what());
        }
    } else {
        try {
            ds = load_idx(a.idx_images, a.idx_labels);
        } catch (const FormatError &e) {
            throw FormatError("idx '" + a.idx_images + "' / '" + a.idx_labels + "': " + e.what());
        }
    }
    std::filesystem::path dst(a.out);
    if (dst.has_parent_path()) {
        std::filesystem::create_directories(dst.parent_path());
    }
    save_dataset(ds, dst);
    out << "wrote " << ds.size() << " images (" << ds.width << "x" << ds.height << ") to "
        << dst.string() << '\n';
}

void cmd_train(const RunConfig &cfg, const std::filesystem::path &dir, std::ostream &out) {
    const Arch arch = parse_arch(cfg.get("arch"));
    const Encoding enc = resolve_encoding(cfg, arch);
    const TrainConfig tc = cfg.train_config();

    const ImageDataset fit_set = configured_dataset(cfg);
    const std::size_t limit = cfg.get_size("max_samples");
    const ImageDataset train_set =
        limit > 0 && limit < fit_set.size() ? take(fit_set, limit) : fit_set;

    SavedModel m;
    m.arch = arch;
    m.encoding = enc;
    m.depth = cfg.get_size("depth");
    m.topology = topology_name(parse_topology(cfg.get("topology")));
    m.angle_scale = cfg.get_double("angle_scale");
    m.trainable_encoder = cfg.get_bool("trainable_encoder");
    m.noise = noise_to_string(tc.noise);
    m.width = fit_set.width;
    m.height = fit_set.height;
    m.config = cfg.values();
    if (enc == Encoding::kPcaAngle) {
        // The projection is fitted on every selected image; max_samples only
        // limits the training set.
        m.pca = pca_fit(fit_set, cfg.get_size("pca"));
    }
    m.qubits = register_width(enc, cfg.get_size("pca"), fit_set.pixel_count());
    if (cfg.is_set("qubits") && cfg.get_size("qubits") != m.qubits) {
        throw ConfigError("config conflict: qubits=" + cfg.get("qubits") + " but the " +
                          encoding_name(enc) + " encoding of this dataset uses " +
                          std::to_string(m.qubits) + " qubits");
    }
    if (arch != Arch::kProduct && enc == Encoding::kPixelAngle &&
        m.qubits > kMaxPixelAngleQubits) {
        throw ConfigError("config conflict: embedding=angle on raw pixels needs " +
                          std::to_string(m.qubits) + " qubits; at most " +
                          std::to_string(kMaxPixelAngleQubits) + " are supported");
    }

    std::vector<FeatureVector> data;
    data.reserve(train_set.size());
    for (const auto &img : train_set.images) {
        data.push_back(encode_features(enc, m.pca, img));
    }

    const bool save_images = cfg.get_bool("save_images");
    std::filesystem::create_directories(dir);
    if (save_images) {
        std::filesystem::create_directories(dir / "images");
    }
    const LogHook hook = [&](std::size_t batch, std::span<const double> params) {
        if (!save_images) {
            return;
        }
        SavedModel snap = m;
        snap.params.assign(params.begin(), params.end());
        char name[32];
        std::snprintf(name, sizeof name, "batch_%06zu.pgm", batch);
        save_pgm(dir / "images" / name, render_model(snap), m.width, m.height);
    };

    const EmbeddingSpec spec = embedding_of(m);
    LossTrace trace;
    switch (arch) {
    case Arch::kIqgan: {
        const IqganModel model =
            make_iqgan(spec, m.depth, parse_topology(m.topology), m.trainable_encoder);
        auto r = train_iqgan(model, data, tc, hook);
        m.params = std::move(r.params);
        trace = std::move(r.trace);
        break;
    }
    case Arch::kQugan: {
        const QuganModel model = make_qugan(spec, m.depth, parse_topology(m.topology));
        auto r = train_qugan(model, data, tc, hook);
        m.params = std::move(r.gen_params);
        m.disc_params = std::move(r.disc_params);
        trace = std::move(r.trace);
        break;
    }
    case Arch::kProduct: {
        ProductIqgan model;
        model.n_pixels = fit_set.pixel_count();
        model.angle_scale = m.angle_scale;
        auto r = train_product(model, data, tc, hook);
        m.params = std::move(r.angles);
        trace = std::move(r.trace);
        break;
    }
    }

    write_text(dir / "params.json", m.to_json() + "\n");
    write_text(dir / "loss.csv", trace.to_csv());
    if (m.pca) {
        Json j = Json::parse(m.pca->to_json());
        j["width"] = m.width;
        j["height"] = m.height;
        write_text(dir / "pca.json", j.dump(2) + "\n");
    }
    save_pgm(dir / "final.pgm", render_model(m), m.width, m.height);

    const LossRow &last = trace.rows.back();
    out << arch_name(arch) << ": " << train_set.size() << " samples, " << m.qubits << " qubits, "
        << m.params.size() << " generator parameters, " << trace.rows.size()
        << " logged rows, final loss_g " << last.loss_g << '\n';
}

enum class BoundsMode { kEigen, kGenerator, kSanity };

struct BoundsArgs {
    BoundsMode mode = BoundsMode::kEigen;
    std::string generator;
    std::string out;
    std::string image;
};

void cmd_bounds(const RunConfig &cfg, const BoundsArgs &a, std::ostream &out) {
    std::optional<SavedModel> gen;
    Encoding enc;
    std::optional<PcaModel> pca;
    double angle_scale = cfg.get_double("angle_scale");
    if (a.mode == BoundsMode::kGenerator) {
        gen = SavedModel::load(a.generator);
        enc = gen->encoding;
        pca = gen->pca;
        angle_scale = gen->angle_scale;
        if (cfg.is_set("pca") || cfg.is_set("raw") || cfg.is_set("embedding")) {
            const Encoding asked = resolve_encoding(cfg, gen->arch);
            if (asked != enc || (pca && pca->k() != cfg.get_size("pca"))) {
                throw ConfigError("config conflict: the encoding requested on the command line "
                                  "differs from the one stored in '" + a.generator + "' (" +
                                  encoding_name(enc) + ")");
            }
        }
    } else {
        enc = resolve_encoding(cfg, Arch::kIqgan);
    }

    const ImageDataset fit_set = configured_dataset(cfg);
    const std::size_t limit = cfg.get_size("max_samples");
    const ImageDataset ds = limit > 0 && limit < fit_set.size() ? take(fit_set, limit) : fit_set;
    if (gen && (gen->width != ds.width || gen->height != ds.height)) {
        throw ConfigError("dataset images are " + std::to_string(ds.width) + "x" +
                          std::to_string(ds.height) + " but '" + a.generator + "' was trained on " +
                          std::to_string(gen->width) + "x" + std::to_string(gen->height));
    }
    if (enc == Encoding::kPcaAngle && !pca) {
        pca = pca_fit(fit_set, cfg.get_size("pca"));
    }
    const std::size_t k = pca ? pca->k() : 0;
    const std::size_t qubits = register_width(enc, k, ds.pixel_count());
    if (qubits > kMaxBoundsQubits) {
        throw ConfigError("bounds: the data register would need " + std::to_string(qubits) +
                          " qubits; at most " + std::to_string(kMaxBoundsQubits) +
                          " fit a dense density matrix");
    }

    EmbeddingSpec spec;
    spec.kind = enc == Encoding::kAmplitude ? EmbeddingKind::kAmplitude : EmbeddingKind::kAngle;
    spec.n_qubits = qubits;
    spec.angle_scale = angle_scale;
    std::vector<StateVector> states;
    states.reserve(ds.size());
    for (const auto &img : ds.images) {
        states.push_back(encode_fixed(spec, encode_features(enc, pca, img)));
    }
    const DensityMatrix rho = uniform_density(states);
    const TopEigen top = best_pure_generator(rho);

    std::filesystem::path image_path = a.image;
    if (image_path.empty()) {
        std::filesystem::path p(a.out);
        image_path = p.parent_path() / (p.stem().string() + "_vmax.pgm");
    }
    save_pgm(image_path, decode_state(enc, pca, top.v_max, ds.pixel_count(), angle_scale),
              ds.width, ds.height);

    Json j;
    if (a.mode == BoundsMode::kSanity) {
        j["mode"] = "sanity";
        j["nash_value"] = nash_value(rho, rho);
        j["trace_distance"] = trace_distance(rho, rho);
        j["uhlmann_fidelity"] = uhlmann_fidelity(rho, rho);
        j["helstrom_success"] = helstrom_success(rho, rho);
        j["lambda_max"] = top.lambda_max;
        out << "sanity: nash_value " << j["nash_value"].get<double>() << " (rho_G = rho_data)\n";
    } else {
        StateVector gamma = top.v_max;
        if (gen) {
            gamma = model_state(*gen, 0);
            if (gamma.n_qubits() != qubits) {
                throw ConfigError("generator '" + a.generator + "' emits " +
                                  std::to_string(gamma.n_qubits()) + " qubits, data register has " +
                                  std::to_string(qubits));
            }
            std::filesystem::path p(a.out);
            save_pgm(p.parent_path() / (p.stem().string() + "_generator.pgm"),
                      gen->arch == Arch::kProduct
                          ? render_model(*gen)
                          : decode_state(enc, pca, gamma, ds.pixel_count(), angle_scale),
                      ds.width, ds.height);
        }
        const BoundReport rep = make_bound_report(rho, gamma, states);
        const LowerBoundCheck lb = discriminator_lower_bound(rho, gamma);
        j["mode"] = a.mode == BoundsMode::kEigen ? "eigen" : "generator";
        const Json fields = Json::parse(rep.to_json());
        for (const auto &[key, value] : fields.items()) {
            j[key] = value;
        }
        j["lower_bound_satisfied"] = lb.satisfied;
        out << rep.to_table();
    }
    j["encoding"] = encoding_name(enc);
    j["n_qubits"] = qubits;
    j["n_states"] = states.size();
    j["vmax_image"] = image_path.string();
    write_text(a.out, j.dump(2) + "\n");
}

struct ToyArgs {
    std::uint64_t seed = 0;
    std::size_t depth = 4;
    std::size_t ancillas = kToyVisible;
    std::size_t epochs = 0;
    std::size_t net_depth = 1;
    std::string out;
};

void cmd_toy(const ToyArgs &a, std::ostream &out) {
    ToyConfig cfg;
    cfg.layers = a.depth;
    cfg.n_ancilla = a.ancillas;
    cfg.net_depth = a.net_depth;
    if (a.epochs > 0) {
        cfg.classical_epochs = a.epochs;
        cfg.quantum_epochs = a.epochs;
    }
    const ToyReport rep = run_comparison(a.seed, cfg);
    write_comparison(rep, a.out);
    for (const auto &m : rep.models) {
        out << m.name << ": mse " << m.mse_raw << ", spread " << m.output_spread << ", "
            << m.n_params << " parameters\n";
    }
}

struct RenderArgs {
    std::string params;
    std::string arch;
    std::string out;
    std::uint64_t seed = 0;
};

void cmd_render(const RenderArgs &a, std::ostream &out) {
    const SavedModel m = SavedModel::load(a.params);
    if (!a.arch.empty() && parse_arch(a.arch) != m.arch) {
        throw ConfigError("--arch " + a.arch + " does not match '" + a.params + "' (arch " +
                          arch_name(m.arch) + ")");
    }
    save_pgm(a.out, render_model(m, a.seed), m.width, m.height);
    out << "wrote " << m.width << "x" << m.height << " image to " << a.out << '\n';
}

struct ProbeArgs {
    std::string pca_model;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t width = 0;
    std::size_t height = 0;
};

void cmd_probe(const ProbeArgs &a, std::ostream &out) {
    const std::string text = read_text(a.pca_model);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception &e) {
        throw FormatError("pca model '" + a.pca_model + "': " + e.what());
    }
    // Accept a params.json as well as a bare pca.json.
    const Json &pj = j.contains("pca") ? j["pca"] : j;
    if (pj.is_null()) {
        throw FormatError("'" + a.pca_model + "' holds no PCA model");
    }
    PcaModel model;
    try {
        model = PcaModel::from_json(pj.dump());
    } catch (const FormatError &e) {
        throw FormatError("pca model '" + a.pca_model + "': " + e.what());
    }
    std::size_t w = a.width;
    std::size_t h = a.height;
    if (w == 0 || h == 0) {
        if (j.contains("width") && j.contains("height")) {
            w = j["width"].get<std::size_t>();
            h = j["height"].get<std::size_t>();
        } else {
            w = h = square_side(model.d());
        }
    }
    if (w * h != model.d()) {
        throw ConfigError("probe: image shape " + std::to_string(w) + "x" + std::to_string(h) +
                          " does not match the model's " + std::to_string(model.d()) +
                          " pixels (pass --width and --height)");
    }
    save_pgm(a.out, random_inverse_probe(model, a.seed), w, h);
    out << "wrote probe (seed " << a.seed << ") to " << a.out << '\n';
}

/// Binds `--flag value` to a RunConfig key; applied only when given.
struct KeyOption {
    std::string key;
    std::string value;
    CLI::Option *opt = nullptr;
};

class KeyOptions {
  public:
    void add(CLI::App *app, const std::string &flag, const std::string &key,
             const std::string &help) {
        auto &k = items_.emplace_back(std::make_unique<KeyOption>());
        k->key = key;
        k->opt = app->add_option(flag, k->value, help);
    }

    void add_switch(CLI::App *app, const std::string &flag, const std::string &key,
                    const std::string &help) {
        auto &k = switches_.emplace_back(std::make_unique<SwitchOption>());
        k->key = key;
        k->opt = app->add_flag(flag, k->on, help);
    }

    void apply(RunConfig &cfg) const {
        for (const auto &k : items_) {
            if (k->opt->count() > 0) {
                cfg.set(k->key, k->value);
            }
        }
        for (const auto &k : switches_) {
            if (k->opt->count() > 0) {
                cfg.set(k->key, k->on ? "true" : "false");
            }
        }
    }

  private:
    struct SwitchOption {
        std::string key;
        bool on = false;
        CLI::Option *opt = nullptr;
    };
    std::vector<std::unique_ptr<KeyOption>> items_;
    std::vector<std::unique_ptr<SwitchOption>> switches_;
};

RunConfig build_config(const std::string &config_file, const KeyOptions &flags,
                       const std::vector<std::string> &sets) {
    RunConfig cfg;
    if (!config_file.empty()) {
        cfg.merge_file(config_file);
    }
    flags.apply(cfg);
    for (const auto &s : sets) {
        cfg.assign(s);
    }
    return cfg;
}

} // namespace

// ---------------------------------------------------------------- RunConfig

RunConfig::RunConfig() : values_(defaults()) {}

std::vector<std::string> RunConfig::keys() {
    std::vector<std::string> k;
    for (const auto &[key, value] : defaults()) {
        k.push_back(key);
    }
    return k;
}

void RunConfig::set(const std::string &key, const std::string &value) {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    it->second = value;
    explicit_.insert(key);
}

void RunConfig::assign(const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("config assignment '" + assignment + "' is not of the form key=value");
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::merge_file(const std::filesystem::path &path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            assign(line);
        } catch (const ConfigError &e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

bool RunConfig::is_set(const std::string &key) const { return explicit_.contains(key); }

const std::string &RunConfig::get(const std::string &key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    return it->second;
}

std::uint64_t RunConfig::get_u64(const std::string &key) const {
    const std::string &s = get(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw bad_value(key, "a non-negative integer", s);
    }
    return v;
}

std::size_t RunConfig::get_size(const std::string &key) const {
    return static_cast<std::size_t>(get_u64(key));
}

double RunConfig::get_double(const std::string &key) const {
    const std::string &s = get(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw bad_value(key, "a finite number", s);
    }
    return v;
}

bool RunConfig::get_bool(const std::string &key) const {
    const std::string &s = get(key);
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw bad_value(key, "true or false", s);
}

std::set<int> RunConfig::classes() const {
    std::set<int> out;
    std::istringstream in(get("classes"));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        int v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw bad_value("classes", "a comma-separated list of integer labels", get("classes"));
        }
        out.insert(v);
    }
    return out;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig tc;
    tc.epochs = get_size("epochs");
    tc.batch_size = get_size("batch_size");
    tc.learning_rate = get_double("lr");
    tc.optimizer.kind = parse_optimizer(get("optimizer"));
    tc.optimizer.beta1 = get_double("beta1");
    tc.optimizer.beta2 = get_double("beta2");
    tc.optimizer.eps = get_double("eps");
    tc.seed = get_u64("seed");
    tc.log_every_batches = get_size("log_every");
    try {
        tc.noise = parse_noise(get("noise"));
    } catch (const InvalidArgument &e) {
        throw ConfigError(std::string("config key 'noise': ") + e.what());
    }
    tc.init_scale = get_double("init_scale");
    tc.disc_steps = get_size("disc_steps");
    tc.gen_steps = get_size("gen_steps");
    tc.generator_loss = parse_generator_loss(get("generator_loss"));
    tc.readout = parse_readout(get("readout"));
    tc.validate();
    return tc;
}

// ---------------------------------------------------------------- enums

Arch parse_arch(const std::string &name) {
    if (name == "iqgan") {
        return Arch::kIqgan;
    }
    if (name == "qugan") {
        return Arch::kQugan;
    }
    if (name == "product") {
        return Arch::kProduct;
    }
    throw bad_value("arch", "iqgan, qugan or product", name);
}

const char *arch_name(Arch a) {
    switch (a) {
    case Arch::kIqgan:
        return "iqgan";
    case Arch::kQugan:
        return "qugan";
    case Arch::kProduct:
        return "product";
    }
    return "?";
}

Encoding parse_encoding(const std::string &name) {
    if (name == "pca-angle") {
        return Encoding::kPcaAngle;
    }
    if (name == "pixel-angle") {
        return Encoding::kPixelAngle;
    }
    if (name == "amplitude") {
        return Encoding::kAmplitude;
    }
    throw FormatError("unknown encoding '" + name + "'");
}

const char *encoding_name(Encoding e) {
    switch (e) {
    case Encoding::kPcaAngle:
        return "pca-angle";
    case Encoding::kPixelAngle:
        return "pixel-angle";
    case Encoding::kAmplitude:
        return "amplitude";
    }
    return "?";
}

// ---------------------------------------------------------------- SavedModel

std::string SavedModel::to_json() const {
    Json j;
    j["format"] = "qganlab-params";
    j["version"] = 1;
    j["arch"] = arch_name(arch);
    j["encoding"] = encoding_name(encoding);
    j["qubits"] = qubits;
    j["depth"] = depth;
    j["topology"] = topology;
    j["angle_scale"] = angle_scale;
    j["trainable_encoder"] = trainable_encoder;
    j["noise"] = noise;
    j["width"] = width;
    j["height"] = height;
    j["params"] = params;
    j["disc_params"] = disc_params;
    j["pca"] = pca ? Json::parse(pca->to_json()) : Json(nullptr);
    j["config"] = Json(config);
    return j.dump(2);
}

SavedModel SavedModel::from_json(const std::string &text) {
    SavedModel m;
    try {
        const Json j = Json::parse(text);
        if (j.value("format", std::string{}) != "qganlab-params") {
            throw FormatError("not a qganlab params file");
        }
        m.arch = parse_arch(j.at("arch").get<std::string>());
        m.encoding = parse_encoding(j.at("encoding").get<std::string>());
        j.at("qubits").get_to(m.qubits);
        j.at("depth").get_to(m.depth);
        j.at("topology").get_to(m.topology);
        j.at("angle_scale").get_to(m.angle_scale);
        j.at("trainable_encoder").get_to(m.trainable_encoder);
        j.at("noise").get_to(m.noise);
        j.at("width").get_to(m.width);
        j.at("height").get_to(m.height);
        j.at("params").get_to(m.params);
        j.at("disc_params").get_to(m.disc_params);
        if (!j.at("pca").is_null()) {
            m.pca = PcaModel::from_json(j["pca"].dump());
        }
        if (j.contains("config")) {
            j["config"].get_to(m.config);
        }
    } catch (const Json::exception &e) {
        throw FormatError(std::string("params json: ") + e.what());
    } catch (const ConfigError &e) {
        throw FormatError(std::string("params json: ") + e.what());
    }
    if (m.encoding == Encoding::kPcaAngle && !m.pca) {
        throw FormatError("params json: pca-angle encoding without a pca model");
    }
    return m;
}

SavedModel SavedModel::load(const std::filesystem::path &path) {
    try {
        return from_json(read_text(path));
    } catch (const FormatError &e) {
        const std::string msg = e.what();
        if (msg.find(path.string()) != std::string::npos) {
            throw;
        }
        throw FormatError("'" + path.string() + "': " + msg);
    }
}

Image render_model(const SavedModel &model, std::uint64_t seed) {
    if (model.arch == Arch::kProduct) {
        ProductIqgan p;
        p.n_pixels = model.params.size();
        p.angle_scale = model.angle_scale;
        const FeatureVector f = product_iqgan_image(p, model.params);
        return {f.values().begin(), f.values().end()};
    }
    return decode_state(model.encoding, model.pca, model_state(model, seed), pixel_count(model),
                        model.angle_scale);
}

// ---------------------------------------------------------------- entry

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qganlab: quantum GAN training, bounds and toy comparisons"};
    app.name("qganlab");
    app.require_subcommand(1);

    IngestArgs ingest;
    auto *s_ingest = app.add_subcommand("ingest", "Convert IDX or CSV images to a QGDS container");
    auto *o_idx = s_ingest->add_option("--idx-images", ingest.idx_images, "IDX image file");
    auto *o_lab = s_ingest->add_option("--idx-labels", ingest.idx_labels, "IDX label file");
    auto *o_csv = s_ingest->add_option("--csv", ingest.csv, "CSV file (label, pixels...)");
    s_ingest->add_option("--out", ingest.out, "Output .qgds path")->required();
    o_idx->needs(o_lab);
    o_lab->needs(o_idx);
    o_csv->excludes(o_idx)->excludes(o_lab);

    std::string train_config_file;
    std::vector<std::string> train_sets;
    std::string train_out;
    KeyOptions train_flags;
    auto *s_train = app.add_subcommand("train", "Train a generator");
    s_train->add_option("--config", train_config_file, "key=value config file");
    s_train->add_option("--set", train_sets, "key=value override (repeatable)");
    s_train->add_option("--out", train_out, "Output directory")->required();
    train_flags.add(s_train, "--dataset", "dataset", "Dataset (.qgds or .csv)");
    train_flags.add(s_train, "--arch", "arch", "iqgan, qugan or product");
    train_flags.add(s_train, "--classes", "classes", "Comma-separated labels");
    train_flags.add(s_train, "--pca", "pca", "PCA components (0 disables)");
    train_flags.add(s_train, "--qubits", "qubits", "Register width (checked)");
    train_flags.add(s_train, "--depth", "depth", "QVC depth");
    train_flags.add(s_train, "--topology", "topology", "chain or ring");
    train_flags.add(s_train, "--embedding", "embedding", "auto, angle or amplitude");
    train_flags.add(s_train, "--epochs", "epochs", "Training epochs");
    train_flags.add(s_train, "--batch-size", "batch_size", "Mini-batch size");
    train_flags.add(s_train, "--lr", "lr", "Learning rate");
    train_flags.add(s_train, "--optimizer", "optimizer", "adam or sgd");
    train_flags.add(s_train, "--seed", "seed", "Random seed");
    train_flags.add(s_train, "--noise", "noise", "none, uniform01 or gaussian:<sigma>");
    train_flags.add(s_train, "--log-every", "log_every", "Batches between logged rows");
    train_flags.add(s_train, "--max-samples", "max_samples", "Training set size (0 = all)");
    train_flags.add_switch(s_train, "--raw", "raw", "Use raw pixels instead of PCA");
    train_flags.add_switch(s_train, "--downsample", "downsample", "Halve the image resolution");
    train_flags.add_switch(s_train, "--trainable-encoder", "trainable_encoder",
                           "Train per-qubit encoder offsets (IQGAN)");

    std::string bounds_config_file;
    std::vector<std::string> bounds_sets;
    BoundsArgs bounds;
    bool eigen = false;
    bool sanity = false;
    KeyOptions bounds_flags;
    auto *s_bounds = app.add_subcommand("bounds", "Evaluate generalization bounds");
    s_bounds->add_option("--config", bounds_config_file, "key=value config file");
    s_bounds->add_option("--set", bounds_sets, "key=value override (repeatable)");
    bounds_flags.add(s_bounds, "--dataset", "dataset", "Dataset (.qgds or .csv)");
    bounds_flags.add(s_bounds, "--classes", "classes", "Comma-separated labels");
    bounds_flags.add(s_bounds, "--pca", "pca", "PCA components");
    bounds_flags.add(s_bounds, "--embedding", "embedding", "auto, angle or amplitude");
    bounds_flags.add(s_bounds, "--max-samples", "max_samples", "Ensemble size (0 = all)");
    bounds_flags.add_switch(s_bounds, "--raw", "raw", "Use raw pixels instead of PCA");
    bounds_flags.add_switch(s_bounds, "--downsample", "downsample", "Halve the image resolution");
    auto *o_gen = s_bounds->add_option("--generator", bounds.generator, "Trained params.json");
    auto *o_eig = s_bounds->add_flag("--eigen", eigen, "Use the leading eigenvector");
    auto *o_san = s_bounds->add_flag("--sanity", sanity, "Use rho_G = rho_data");
    o_gen->excludes(o_eig)->excludes(o_san);
    o_eig->excludes(o_san);
    s_bounds->add_option("--out", bounds.out, "Report JSON path")->required();
    s_bounds->add_option("--image", bounds.image, "v_max image path");

    ToyArgs toy;
    auto *s_toy = app.add_subcommand("toy", "Classical vs quantum toy comparison");
    s_toy->add_option("--seed", toy.seed, "Seed of the target and training");
    s_toy->add_option("--depth", toy.depth, "Quantum circuit layers");
    s_toy->add_option("--ancillas", toy.ancillas, "Ancillas of the mixed model (0 skips it)")
        ->check(CLI::Range(0, 6));
    s_toy->add_option("--epochs", toy.epochs, "Epochs for every model (default 2000)");
    s_toy->add_option("--net-depth", toy.net_depth, "Classical hidden layers");
    s_toy->add_option("--out", toy.out, "Output directory")->required();

    RenderArgs render;
    auto *s_render = app.add_subcommand("render", "Render a trained generator to PGM");
    s_render->add_option("--params", render.params, "params.json")->required();
    s_render->add_option("--arch", render.arch, "Expected architecture");
    s_render->add_option("--seed", render.seed, "Noise seed (QuGAN with noise)");
    s_render->add_option("--out", render.out, "Output PGM")->required();

    ProbeArgs probe;
    auto *s_probe = app.add_subcommand("probe", "Inverse-PCA image of a random feature vector");
    s_probe->add_option("--pca-model", probe.pca_model, "pca.json or params.json")->required();
    s_probe->add_option("--seed", probe.seed, "Probe seed");
    s_probe->add_option("--out", probe.out, "Output PGM")->required();
    s_probe->add_option("--width", probe.width, "Image width");
    s_probe->add_option("--height", probe.height, "Image height");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("qganlab");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &s : argv_store) {
        argv.push_back(s.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (s_ingest->parsed() && ingest.csv.empty() && ingest.idx_images.empty()) {
            throw CLI::ValidationError("ingest", "give --csv or --idx-images with --idx-labels");
        }
        if (s_bounds->parsed() && !eigen && !sanity && bounds.generator.empty()) {
            throw CLI::ValidationError("bounds", "give one of --generator, --eigen or --sanity");
        }
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (s_ingest->parsed()) {
            cmd_ingest(ingest, out);
        } else if (s_train->parsed()) {
            cmd_train(build_config(train_config_file, train_flags, train_sets), train_out, out);
        } else if (s_bounds->parsed()) {
            bounds.mode = sanity  ? BoundsMode::kSanity
                          : eigen ? BoundsMode::kEigen
                                  : BoundsMode::kGenerator;
            cmd_bounds(build_config(bounds_config_file, bounds_flags, bounds_sets), bounds, out);
        } else if (s_toy->parsed()) {
            cmd_toy(toy, out);
        } else if (s_render->parsed()) {
            cmd_render(render, out);
        } else if (s_probe->parsed()) {
            cmd_probe(probe, out);
        }
    } catch (const std::exception &e) {
        err << "qganlab: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace qgan::cli
