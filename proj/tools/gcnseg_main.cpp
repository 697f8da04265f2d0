// Copyright 2026 The gcnseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcnseg/errors.hpp"
#include "gcnseg/grid_graph.hpp"
#include "gcnseg/io.hpp"
#include "gcnseg/metrics.hpp"
#include "gcnseg/model.hpp"
#include "gcnseg/parallel.hpp"
#include "gcnseg/preprocess.hpp"
#include "gcnseg/stat_features.hpp"
#include "gcnseg/synthetic.hpp"
#include "gcnseg/training.hpp"

namespace fs = std::filesystem;

namespace {

struct SynthArgs {
    gcnseg::SynthConfig cfg;
    std::size_t scenes = 1;
    std::string out_dir;
};

struct TrainArgs {
    gcnseg::TrainConfig cfg;
    std::string data_dir;
    std::string model_out;
    std::string log_out;
    std::string interpolation = "bicubic";
    bool log_timing = false;
    int threads = 0;
};

struct InferArgs {
    std::string model_path;
    std::string scene_path;
    std::string out_path;
    gcnseg::PreprocConfig preproc;
    std::string interpolation = "bicubic";
    double threshold = 0.5;
    int threads = 0;
    bool k_given = false;
};

struct EvalArgs {
    std::vector<std::string> pred;
    std::vector<std::string> gt;
    std::vector<std::string> exclusion;
    std::string csv_out;
};

std::vector<gcnseg::LabeledScene> load_dataset(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw gcnseg::InputError("data directory '" + dir + "' does not exist");
    std::vector<fs::path> scene_files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scs")
            scene_files.push_back(entry.path());
    std::sort(scene_files.begin(), scene_files.end());
    if (scene_files.empty())
        throw gcnseg::InputError("no .scs scene files in '" + dir + "'");

    std::vector<gcnseg::LabeledScene> scenes;
    scenes.reserve(scene_files.size());
    for (const fs::path& path : scene_files) {
        gcnseg::LabeledScene item;
        item.id = path.stem().string();
        item.scene = gcnseg::read_scene(path);
        fs::path label_path = path;
        label_path.replace_extension(".msk");
        if (!fs::exists(label_path))
            throw gcnseg::InputError("scene '" + item.id + "' has no label file (" +
                                     label_path.string() + ")");
        gcnseg::LabelRaster label = gcnseg::read_label(label_path);
        if (label.height != item.scene.label_height() || label.width != item.scene.label_width())
            throw gcnseg::InputError("label for '" + item.id + "' is " +
                                     std::to_string(label.height) + "x" +
                                     std::to_string(label.width) + " but the scene needs " +
                                     std::to_string(item.scene.label_height()) + "x" +
                                     std::to_string(item.scene.label_width()));
        item.scene.label = std::move(label.data);
        scenes.push_back(std::move(item));
    }
    return scenes;
}

int run_synth(const SynthArgs& args) {
    args.cfg.validate();
    if (args.scenes == 0) throw gcnseg::InputError("synth: --scenes must be >= 1");
    fs::create_directories(args.out_dir);
    for (std::size_t i = 0; i < args.scenes; ++i) {
        gcnseg::SynthConfig cfg = args.cfg;
        cfg.seed = args.cfg.seed + i;
        const gcnseg::SceneSeries scene = gcnseg::generate_synthetic(cfg);
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%03zu", i);
        const fs::path base = fs::path(args.out_dir) / name;
        gcnseg::write_scene(scene, fs::path(base).replace_extension(".scs"));
        gcnseg::LabelRaster label;
        label.height = scene.label_height();
        label.width = scene.label_width();
        label.data = scene.label;
        gcnseg::write_label(label, fs::path(base).replace_extension(".msk"));
        std::cerr << "wrote " << base.string() << ".{scs,msk}\n";
    }
    return 0;
}

int run_train(TrainArgs& args) {
    args.cfg.preproc.interpolation = gcnseg::interpolation_from_name(args.interpolation);
    args.cfg.validate();
    if (args.threads > 0) gcnseg::set_max_threads(args.threads);
    const auto scenes = load_dataset(args.data_dir);
    const gcnseg::TrainResult result = gcnseg::train(scenes, args.cfg);
    gcnseg::save_model(result.model, args.model_out);
    const std::string log_path =
        args.log_out.empty() ? args.model_out + ".csv" : args.log_out;
    gcnseg::write_train_log_csv(result.log, log_path, args.log_timing);
    std::cerr << "trained " << result.log.epochs.size() << " epoch(s); best epoch "
              << result.log.best_epoch << " (val BCE "
              << result.log.epochs[result.log.best_epoch].val_bce << ", val MCC "
              << result.log.epochs[result.log.best_epoch].val_mcc << ")\n"
              << "model -> " << args.model_out << "\nlog   -> " << log_path << "\n";
    return 0;
}

int run_infer(InferArgs& args) {
    args.preproc.interpolation = gcnseg::interpolation_from_name(args.interpolation);
    if (args.threads > 0) gcnseg::set_max_threads(args.threads);
    const gcnseg::GcnModel model = gcnseg::load_model(args.model_path);
    if (!args.k_given) args.preproc.pooled_channels = model.input_dim();
    args.preproc.validate();
    if (!(args.threshold > 0.0 && args.threshold < 1.0))
        throw gcnseg::InputError("infer: threshold must be inside (0, 1)");
    const gcnseg::SceneSeries scene = gcnseg::read_scene(args.scene_path);
    const std::vector<std::uint8_t> map =
        gcnseg::infer_scene(model, scene, args.preproc, args.threshold);
    gcnseg::LabelRaster out;
    out.height = scene.height * args.preproc.scale;
    out.width = scene.width * args.preproc.scale;
    out.data = map;
    gcnseg::write_label(out, args.out_path);
    std::cerr << "wrote " << out.height << "x" << out.width << " map -> " << args.out_path
              << "\n";
    return 0;
}

void print_report_row(const std::string& name, const double* values) {
    std::printf("%-16s", name.c_str());
    for (int i = 0; i < 6; ++i) std::printf("  %8.4f", values[i]);
    std::printf("\n");
}

int run_eval(const EvalArgs& args) {
    if (args.pred.size() != args.gt.size())
        throw gcnseg::InputError("eval: need as many --gt as --pred paths");
    if (!args.exclusion.empty() && args.exclusion.size() != args.pred.size())
        throw gcnseg::InputError("eval: need as many --exclusion as --pred paths (or none)");
    if (args.pred.empty()) throw gcnseg::InputError("eval: no prediction files");

    std::vector<std::array<double, 6>> rows;
    std::printf("%-16s  %8s  %8s  %8s  %8s  %8s  %8s\n", "scene", "mcc_full", "mcc_mask",
                "f1_full", "f1_mask", "acc_full", "acc_mask");
    std::string csv = "scene,mcc_full,mcc_mask,f1_full,f1_mask,acc_full,acc_mask\n";
    for (std::size_t i = 0; i < args.pred.size(); ++i) {
        const gcnseg::LabelRaster pred = gcnseg::read_label(args.pred[i]);
        const gcnseg::LabelRaster gt = gcnseg::read_label(args.gt[i]);
        if (pred.height != gt.height || pred.width != gt.width)
            throw gcnseg::InputError("eval: '" + args.pred[i] + "' is " +
                                     std::to_string(pred.height) + "x" +
                                     std::to_string(pred.width) + " but '" + args.gt[i] +
                                     "' is " + std::to_string(gt.height) + "x" +
                                     std::to_string(gt.width));
        gcnseg::LabelRaster excl;
        if (!args.exclusion.empty()) {
            excl = gcnseg::read_label(args.exclusion[i]);
            if (excl.height != gt.height || excl.width != gt.width)
                throw gcnseg::InputError("eval: exclusion raster dims do not match the maps");
        }
        const gcnseg::EvalReport report = gcnseg::evaluate(
            pred.data, gt.data,
            excl.data.empty() ? std::span<const std::uint8_t>{}
                              : std::span<const std::uint8_t>(excl.data));
        const std::string name = fs::path(args.pred[i]).stem().string();
        const std::array<double, 6> row = {report.mcc_full, report.mcc_mask, report.f1_full,
                                           report.f1_mask, report.acc_full, report.acc_mask};
        rows.push_back(row);
        print_report_row(name, row.data());
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", name.c_str(),
                      row[0], row[1], row[2], row[3], row[4], row[5]);
        csv += line;
    }
    if (rows.size() > 1) {
        std::array<double, 6> mean{}, stddev{};
        for (const auto& row : rows)
            for (int i = 0; i < 6; ++i) mean[i] += row[i];
        for (int i = 0; i < 6; ++i) mean[i] /= static_cast<double>(rows.size());
        for (const auto& row : rows)
            for (int i = 0; i < 6; ++i) stddev[i] += (row[i] - mean[i]) * (row[i] - mean[i]);
        for (int i = 0; i < 6; ++i)
            stddev[i] = std::sqrt(stddev[i] / static_cast<double>(rows.size()));
        print_report_row("mean", mean.data());
        print_report_row("std", stddev.data());
        char line[256];
        std::snprintf(line, sizeof(line), "mean,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", mean[0],
                      mean[1], mean[2], mean[3], mean[4], mean[5]);
        csv += line;
        std::snprintf(line, sizeof(line), "std,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", stddev[0],
                      stddev[1], stddev[2], stddev[3], stddev[4], stddev[5]);
        csv += line;
    }
    if (!args.csv_out.empty()) {
        const fs::path tmp = args.csv_out + ".tmp";
        FILE* f = std::fopen(tmp.string().c_str(), "wb");
        if (!f) throw gcnseg::InputError("cannot open '" + tmp.string() + "'");
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
        fs::rename(tmp, args.csv_out);
    }
    return 0;
}

int run_inspect(const std::string& model_path) {
    const gcnseg::GcnModel model = gcnseg::load_model(model_path);
    const auto dims = model.dims();
    std::printf("layers: %zu\n", model.layer_count());
    std::printf("dims:");
    for (std::size_t i = 0; i < dims.size(); ++i)
        std::printf("%s%zu", i == 0 ? " " : " -> ", dims[i]);
    std::printf("\n");
    std::printf("params: %zu\n", gcnseg::count_parameters(model));
    std::printf("file bytes: %ju\n",
                static_cast<std::uintmax_t>(fs::file_size(model_path)));
    return 0;
}

int run_features(const std::string& scene_path, const std::string& out_path,
                 std::size_t window) {
    const gcnseg::SceneSeries scene = gcnseg::read_scene(scene_path);
    const gcnseg::FeatureGrid grid = gcnseg::extract_stat_features(scene, window);
    const std::size_t dims[3] = {grid.height, grid.width, grid.channels};
    gcnseg::write_tensor(out_path, dims, grid.data);
    std::cerr << "wrote " << grid.height << "x" << grid.width << "x" << grid.channels
              << " feature tensor -> " << out_path << "\n";
    return 0;
}

int run_graph_dump(std::size_t height, std::size_t width, const std::string& connectivity,
                   bool raw) {
    gcnseg::Connectivity conn;
    if (connectivity == "four")
        conn = gcnseg::Connectivity::Four;
    else if (connectivity == "eight")
        conn = gcnseg::Connectivity::Eight;
    else
        throw gcnseg::InputError("graph-dump: connectivity must be 'four' or 'eight'");
    gcnseg::CsrMatrix m = gcnseg::build_adjacency(height, width, conn);
    if (!raw) m = gcnseg::normalize_adjacency(m);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
            std::printf("%zu %zu %.17g\n", r, m.col_idx[k], m.values[k]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph-convolutional cultivated-land segmentation pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key = value file");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic scene + label files");
    synth_cmd->add_option("--scenes", synth.scenes, "Number of scenes")->capture_default_str();
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth.cfg.seed, "Base seed (scene i uses seed + i)")
        ->capture_default_str();
    synth_cmd->add_option("--frames", synth.cfg.frames, "Images per series (T)")
        ->capture_default_str();
    synth_cmd->add_option("--bands", synth.cfg.bands, "Bands per image (B)")
        ->capture_default_str();
    synth_cmd->add_option("--height", synth.cfg.height, "Scene height, low-res pixels")
        ->capture_default_str();
    synth_cmd->add_option("--width", synth.cfg.width, "Scene width, low-res pixels")
        ->capture_default_str();
    synth_cmd->add_option("--parcels-min", synth.cfg.parcels_min, "Minimum parcel count")
        ->capture_default_str();
    synth_cmd->add_option("--parcels-max", synth.cfg.parcels_max, "Maximum parcel count")
        ->capture_default_str();
    synth_cmd->add_option("--parcel-min", synth.cfg.parcel_extent_min,
                          "Minimum parcel extent, low-res pixels")
        ->capture_default_str();
    synth_cmd->add_option("--parcel-max", synth.cfg.parcel_extent_max,
                          "Maximum parcel extent, low-res pixels")
        ->capture_default_str();
    synth_cmd->add_option("--spectral-gap", synth.cfg.spectral_gap,
                          "Cultivated-background reflectance gap")
        ->capture_default_str();
    synth_cmd->add_option("--seasonal-amplitude", synth.cfg.seasonal_amplitude,
                          "Seasonal modulation of cultivated reflectance")
        ->capture_default_str();
    synth_cmd->add_option("--noise-std", synth.cfg.noise_std, "Gaussian noise sigma")
        ->capture_default_str();
    synth_cmd->add_option("--cloud-fraction", synth.cfg.cloud_fraction,
                          "Expected masked fraction per frame")
        ->capture_default_str();
    synth_cmd->add_option("--border", synth.cfg.excluded_border,
                          "Excluded border width, low-res pixels")
        ->capture_default_str();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train a model on a scene directory");
    train_cmd->add_option("--data", train.data_dir, "Directory of .scs/.msk pairs")->required();
    train_cmd->add_option("--out", train.model_out, "Output model path (.gcm)")->required();
    train_cmd->add_option("--log", train.log_out, "Training-log CSV path (default <out>.csv)");
    train_cmd->add_option("--lr", train.cfg.learning_rate, "Learning rate")
        ->capture_default_str();
    train_cmd->add_option("--batch-size", train.cfg.batch_size, "Patches per optimizer step")
        ->capture_default_str();
    train_cmd->add_option("--patience", train.cfg.patience, "Early-stopping patience, epochs")
        ->capture_default_str();
    train_cmd->add_option("--max-epochs", train.cfg.max_epochs, "Epoch cap")
        ->capture_default_str();
    train_cmd->add_option("--val-fraction", train.cfg.validation_fraction,
                          "Validation scene fraction")
        ->capture_default_str();
    train_cmd->add_option("--seed", train.cfg.seed, "Training seed")->capture_default_str();
    train_cmd->add_option("--k", train.cfg.preproc.pooled_channels,
                          "Pooled channels per node")
        ->capture_default_str();
    train_cmd->add_option("--patch-size", train.cfg.preproc.patch_size,
                          "Patch size, low-res pixels")
        ->capture_default_str();
    train_cmd->add_option("--interpolation", train.interpolation,
                          "bicubic | nearest | lanczos | inter-area")
        ->capture_default_str();
    train_cmd->add_option("--threshold", train.cfg.threshold, "Decision threshold")
        ->capture_default_str();
    train_cmd->add_option("--threads", train.threads,
                          "Worker threads (default: GCN_THREADS or 1)");
    train_cmd->add_flag("--log-timing", train.log_timing,
                        "Record wall time per epoch in the CSV");

    InferArgs infer;
    auto* infer_cmd = app.add_subcommand("infer", "Segment one scene with a trained model");
    infer_cmd->add_option("--model", infer.model_path, "Model file")->required();
    infer_cmd->add_option("--scene", infer.scene_path, "Scene file (.scs)")->required();
    infer_cmd->add_option("--out", infer.out_path, "Output map path (.msk)")->required();
    auto* infer_k_opt = infer_cmd->add_option("--k", infer.preproc.pooled_channels,
                                              "Pooled channels (default: model input dim)");
    infer_cmd->add_option("--scale", infer.preproc.scale, "Upsampling factor")
        ->capture_default_str();
    infer_cmd->add_option("--patch-size", infer.preproc.patch_size,
                          "Patch size, low-res pixels")
        ->capture_default_str();
    infer_cmd->add_option("--interpolation", infer.interpolation,
                          "bicubic | nearest | lanczos | inter-area")
        ->capture_default_str();
    infer_cmd->add_option("--threshold", infer.threshold, "Decision threshold")
        ->capture_default_str();
    infer_cmd->add_option("--threads", infer.threads,
                          "Worker threads (default: GCN_THREADS or 1)");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
    eval_cmd->add_option("--pred", eval.pred, "Prediction map(s)")->required();
    eval_cmd->add_option("--gt", eval.gt, "Ground-truth map(s)")->required();
    eval_cmd->add_option("--exclusion", eval.exclusion,
                         "Exclusion raster(s) honored by the Mask scores");
    eval_cmd->add_option("--csv", eval.csv_out, "Also write the report as CSV");

    std::string inspect_model;
    auto* inspect_cmd = app.add_subcommand("inspect", "Print model architecture and size");
    inspect_cmd->add_option("--model", inspect_model, "Model file")->required();

    std::string feat_scene, feat_out;
    std::size_t feat_window = 5;
    auto* feat_cmd = app.add_subcommand("features", "Extract per-pixel statistical features");
    feat_cmd->add_option("--scene", feat_scene, "Scene file (.scs)")->required();
    feat_cmd->add_option("--out", feat_out, "Output tensor path (.tns)")->required();
    feat_cmd->add_option("--window", feat_window, "Odd spatial window")->capture_default_str();

    std::size_t dump_h = 0, dump_w = 0;
    std::string dump_conn = "eight";
    bool dump_raw = false;
    auto* dump_cmd = app.add_subcommand("graph-dump", "Print (node, neighbor, value) triples");
    dump_cmd->add_option("--height", dump_h, "Grid height")->required();
    dump_cmd->add_option("--width", dump_w, "Grid width")->required();
    dump_cmd->add_option("--connectivity", dump_conn, "four | eight")->capture_default_str();
    dump_cmd->add_flag("--raw", dump_raw, "Dump the unnormalized binary adjacency");

    CLI11_PARSE(app, argc, argv);
    infer.k_given = infer_k_opt->count() > 0;

    try {
        if (*synth_cmd) return run_synth(synth);
        if (*train_cmd) return run_train(train);
        if (*infer_cmd) return run_infer(infer);
        if (*eval_cmd) return run_eval(eval);
        if (*inspect_cmd) return run_inspect(inspect_model);
        if (*feat_cmd) return run_features(feat_scene, feat_out, feat_window);
        if (*dump_cmd) return run_graph_dump(dump_h, dump_w, dump_conn, dump_raw);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
