#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gdnn/analysis.hpp"
#include "gdnn/checkpoint.hpp"
#include "gdnn/config.hpp"
#include "gdnn/dataset.hpp"
#include "gdnn/dropout.hpp"
#include "gdnn/errors.hpp"
#include "gdnn/manifest.hpp"
#include "gdnn/theory.hpp"
#include "gdnn/train.hpp"
#include "gdnn/version.hpp"

namespace fs = std::filesystem;
using namespace gd;

namespace {

// Exit codes: 0 ok, 1 check failure, 2 usage/config, 3 data, 4 checkpoint.
struct DataFlags {
    std::string mnist_images, mnist_labels;
    std::string mnist_test_images, mnist_test_labels;
    std::string cifar_dir;
    std::uint64_t subsample_n = 0;
    std::uint64_t subsample_seed = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool with_train) {
    if (with_train) {
        cmd->add_option("--mnist-images", f.mnist_images, "IDX image file for training");
        cmd->add_option("--mnist-labels", f.mnist_labels, "IDX label file for training");
        cmd->add_option("--subsample-n", f.subsample_n,
                        "Stratified training subset size (0 = use everything)");
        cmd->add_option("--subsample-seed", f.subsample_seed, "Seed for the subset draw");
    }
    cmd->add_option("--mnist-test-images", f.mnist_test_images, "IDX image file for evaluation");
    cmd->add_option("--mnist-test-labels", f.mnist_test_labels, "IDX label file for evaluation");
    cmd->add_option("--cifar-dir", f.cifar_dir,
                    "Directory with CIFAR-10 binary batches (data_batch_*.bin, test_batch.bin)");
}

Dataset load_train_set(const DataFlags& f) {
    Dataset d;
    if (!f.mnist_images.empty() || !f.mnist_labels.empty()) {
        if (f.mnist_images.empty() || f.mnist_labels.empty()) {
            throw ConfigError("--mnist-images and --mnist-labels must be given together");
        }
        d = load_mnist_idx(f.mnist_images, f.mnist_labels);
    } else if (!f.cifar_dir.empty()) {
        std::vector<std::string> paths;
        for (int i = 1; i <= 5; ++i) {
            paths.push_back((fs::path(f.cifar_dir) / ("data_batch_" + std::to_string(i) + ".bin"))
                                .string());
        }
        d = load_cifar10_bin(paths);
    } else {
        throw ConfigError("no training data: pass --mnist-images/--mnist-labels or --cifar-dir");
    }
    if (f.subsample_n > 0) d = subsample(d, f.subsample_n, f.subsample_seed);
    return d;
}

Dataset load_test_set(const DataFlags& f) {
    if (!f.mnist_test_images.empty() || !f.mnist_test_labels.empty()) {
        if (f.mnist_test_images.empty() || f.mnist_test_labels.empty()) {
            throw ConfigError("--mnist-test-images and --mnist-test-labels must be given together");
        }
        return load_mnist_idx(f.mnist_test_images, f.mnist_test_labels);
    }
    if (!f.cifar_dir.empty()) {
        return load_cifar10_bin({(fs::path(f.cifar_dir) / "test_batch.bin").string()});
    }
    throw ConfigError("no test data: pass --mnist-test-images/--mnist-test-labels or --cifar-dir");
}

int cmd_train(const std::string& config_path, const DataFlags& data, const std::string& out_dir,
              bool seed_set, std::uint64_t seed) {
    TrainConfig cfg = load_train_config(config_path);
    if (seed_set) cfg.seed = seed;

    const Dataset train_set = load_train_set(data);
    const Dataset test_set = load_test_set(data);
    fs::create_directories(out_dir);

    RunManifest man;
    man.command = "train";
    man.seed = cfg.seed;
    man.config = config_to_kv(cfg);
    man.start_time = iso8601_utc_now();

    const auto [net, metrics] = train(cfg, train_set, test_set, [&](const EpochMetrics& m) {
        std::fprintf(stderr,
                     "epoch %3zu  train_loss %.4f  test_loss %.4f  train_acc %.4f  "
                     "test_acc %.4f  lr %g  drop %g  %.2fs\n",
                     m.epoch, m.train_loss, m.test_loss, m.train_acc, m.test_acc, m.lr,
                     m.drop_rate, m.wall_seconds);
    });

    const fs::path out(out_dir);
    write_metrics_csv((out / "metrics.csv").string(), metrics);
    save_checkpoint(net, (out / "checkpoint.gdnn").string());
    man.artifacts = {"metrics.csv", "checkpoint.gdnn", "manifest.json"};
    man.end_time = iso8601_utc_now();
    write_manifest((out / "manifest.json").string(), man);

    if (!metrics.empty()) {
        std::printf("final test_acc %.17g test_loss %.17g\n", metrics.back().test_acc,
                    metrics.back().test_loss);
    }
    return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const DataFlags& data) {
    const Network net = load_checkpoint(checkpoint_path);
    const Dataset test_set = load_test_set(data);
    const auto [loss, acc] = evaluate(net, test_set);
    std::printf("test_loss %.17g test_acc %.17g\n", loss, acc);
    return 0;
}

int cmd_ablate(const std::string& checkpoint_path, const DataFlags& data,
               const std::string& out_dir, std::size_t layer, const std::string& order_name,
               std::size_t step) {
    const Network net = load_checkpoint(checkpoint_path);
    const Dataset test_set = load_test_set(data);
    const AblationOrder order = parse_order(order_name);
    fs::create_directories(out_dir);

    RunManifest man;
    man.command = "ablate";
    man.seed = net.seed;
    man.start_time = iso8601_utc_now();

    const AblationCurve curve = ablation_sweep(net, test_set, layer, order, step);
    const auto [edges, counts] = strength_histogram(net, layer);

    const fs::path out(out_dir);
    write_ablation_csv((out / "ablation.csv").string(), curve);
    write_histogram_csv((out / "histogram.csv").string(), edges, counts);
    man.artifacts = {"ablation.csv", "histogram.csv", "manifest.json"};
    man.end_time = iso8601_utc_now();
    write_manifest((out / "manifest.json").string(), man);

    std::printf("ablation points %zu, baseline acc %.17g\n", curve.points.size(),
                curve.points.front().second);
    return 0;
}

int cmd_verify(const VerifyOptions& opts, const std::string& out_dir) {
    fs::create_directories(out_dir);

    RunManifest man;
    man.command = "verify";
    man.seed = opts.seed;
    man.start_time = iso8601_utc_now();

    const VerifyReport report = run_verify_suite(opts);

    nlohmann::json j;
    j["schema_version"] = 1;
    j["library_version"] = kVersion;
    j["options"] = {{"n_max", opts.n_max},
                    {"trials", opts.trials},
                    {"tolerance", opts.tolerance},
                    {"grad_tolerance", opts.grad_tolerance},
                    {"seed", opts.seed}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["asserted"] = c.asserted;
        jc["passed"] = c.passed;
        jc["max_rel_error"] = c.max_rel_error;
        jc["tolerance"] = c.tolerance;
        jc["trials"] = c.trials;
        if (!c.details.empty()) jc["details"] = c.details;
        j["checks"].push_back(jc);
    }
    j["all_passed"] = report.all_passed;

    const fs::path out(out_dir);
    const std::string report_path = (out / "verify_report.json").string();
    {
        const std::string tmp = report_path + ".tmp";
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw DataError("cannot open " + tmp + " for writing");
        f << j.dump(2) << "\n";
        if (!f) throw DataError("write failed on " + tmp);
        f.close();
        if (std::rename(tmp.c_str(), report_path.c_str()) != 0) {
            throw DataError("cannot move " + tmp + " to " + report_path);
        }
    }
    man.artifacts = {"verify_report.json", "manifest.json"};
    man.end_time = iso8601_utc_now();
    write_manifest((out / "manifest.json").string(), man);

    for (const auto& c : report.checks) {
        std::printf("%-42s %s  max_rel_err %.3g  tol %.3g%s\n", c.name.c_str(),
                    c.passed ? "PASS" : "FAIL", c.max_rel_error, c.tolerance,
                    c.asserted ? "" : "  (observational)");
        if (!c.details.empty()) std::printf("    %s\n", c.details.c_str());
    }
    std::printf("verify: %s\n", report.all_passed ? "all asserted checks passed" : "FAILED");
    return report.all_passed ? 0 : 1;
}

int cmd_bench(const std::string& config_path, const DataFlags& data, const std::string& out_dir,
              const std::vector<std::string>& policies, double drop_rate, std::size_t epochs) {
    const TrainConfig base = load_train_config(config_path);
    const Dataset train_set = load_train_set(data);

    std::vector<TrainConfig> cfgs;
    for (const auto& name : policies) {
        DropoutPolicy p = parse_policy(name, 0.0);
        if (p.needs_rate()) p = parse_policy(name, drop_rate);
        cfgs.push_back(with_policy(base, p));
    }

    fs::create_directories(out_dir);
    RunManifest man;
    man.command = "bench";
    man.seed = base.seed;
    man.config = config_to_kv(base);
    man.start_time = iso8601_utc_now();

    const auto rows = time_per_epoch(cfgs, train_set, epochs);
    const fs::path out(out_dir);
    write_timing_csv((out / "timing.csv").string(), rows);
    man.artifacts = {"timing.csv", "manifest.json"};
    man.end_time = iso8601_utc_now();
    write_manifest((out / "manifest.json").string(), man);

    for (const auto& [name, secs] : rows) std::printf("%-14s %.3fs/epoch\n", name.c_str(), secs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense-NN training with per-node strength and guided dropout"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    int threads = 1;
    app.add_option("--threads", threads, "Worker threads for matrix products (default 1)")
        ->check(CLI::Range(1, 256));

    DataFlags data;
    std::string config_path, out_dir = "out", checkpoint_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* tr = app.add_subcommand("train", "Train a network from a config file");
    tr->add_option("--config", config_path, "Config file")->required();
    tr->add_option("--out", out_dir, "Output directory (metrics.csv, checkpoint, manifest)");
    tr->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
        seed_set = true;
    });
    add_data_flags(tr, data, true);

    auto* ev = app.add_subcommand("evaluate", "Evaluate a checkpoint on a test set");
    ev->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
    add_data_flags(ev, data, false);

    std::size_t layer = 0, step = 1;
    std::string order_name = "asc";
    auto* ab = app.add_subcommand("ablate", "Strength-ordered node ablation sweep");
    ab->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
    ab->add_option("--layer", layer, "Hidden layer index (default 0)");
    ab->add_option("--order", order_name, "asc (low strength first) or desc");
    ab->add_option("--step", step, "Removals between accuracy evaluations");
    ab->add_option("--out", out_dir, "Output directory (ablation.csv, histogram.csv)");
    add_data_flags(ab, data, false);

    VerifyOptions vopts;
    auto* vf = app.add_subcommand("verify", "Numerical checks for the factorized-model analysis");
    vf->add_option("--n", vopts.n_max, "Max factor count for enumerations (<= 20)");
    vf->add_option("--trials", vopts.trials, "Random instances for the objective identity");
    vf->add_option("--tolerance", vopts.tolerance, "Relative tolerance for the identity");
    vf->add_option("--grad-tolerance", vopts.grad_tolerance,
                   "Relative tolerance for finite-difference checks");
    vf->add_option("--seed", vopts.seed, "Suite RNG seed");
    vf->add_option("--out", out_dir, "Output directory (verify_report.json)");

    std::vector<std::string> policies = {"none", "standard", "strength_only", "guided_topk",
                                         "guided_dr"};
    double bench_rate = 0.2;
    std::size_t bench_epochs = 1;
    auto* bn = app.add_subcommand("bench", "Per-epoch training time for each policy");
    bn->add_option("--config", config_path, "Config file")->required();
    bn->add_option("--policies", policies, "Policies to time")->delimiter(',');
    bn->add_option("--drop-rate", bench_rate, "Rate for policies that need one");
    bn->add_option("--epochs", bench_epochs, "Timed epochs per policy (median reported)");
    bn->add_option("--out", out_dir, "Output directory (timing.csv)");
    add_data_flags(bn, data, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    set_max_threads(threads);
    try {
        if (tr->parsed()) return cmd_train(config_path, data, out_dir, seed_set, seed);
        if (ev->parsed()) return cmd_evaluate(checkpoint_path, data);
        if (ab->parsed()) return cmd_ablate(checkpoint_path, data, out_dir, layer, order_name, step);
        if (vf->parsed()) return cmd_verify(vopts, out_dir);
        if (bn->parsed()) {
            return cmd_bench(config_path, data, out_dir, policies, bench_rate, bench_epochs);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParamError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const CheckpointError& e) {
        std::fprintf(stderr, "checkpoint error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
