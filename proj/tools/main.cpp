#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teachset/cli.hpp"
#include "teachset/config.hpp"
#include "teachset/service.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"training-set descriptors and a teachable recognizer for photo corpora"};
    app.require_subcommand(1);

    std::string config_str;
    app.add_option("--config", config_str, "toolkit configuration JSON")->envname("TEACHSET_CONFIG");
    auto config_path = [&]() -> std::optional<fs::path> {
        if (config_str.empty()) return std::nullopt;
        return fs::path(config_str);
    };

    // describe
    auto* describe = app.add_subcommand("describe", "compute photo and set descriptors");
    std::string describe_manifest;
    std::string describe_out = "out";
    describe->add_option("manifest", describe_manifest, "set manifest JSON")->required();
    describe->add_option("-o,--out", describe_out, "output directory");

    // correlate
    auto* correlate = app.add_subcommand("correlate", "estimated vs annotated correlations");
    std::vector<std::string> pair_args;
    std::string correlate_out = "out";
    correlate->add_option("--pair", pair_args, "summary.json annotations.json")
        ->expected(-2)
        ->required();
    correlate->add_option("-o,--out", correlate_out, "output directory");

    // train
    auto* train = app.add_subcommand("train", "train a recognizer from labeled manifests");
    std::vector<std::string> train_manifests;
    std::string model_out = "model.json";
    train->add_option("manifests", train_manifests, "labeled set manifests")->required();
    train->add_option("-o,--out", model_out, "model output path");

    // recognize
    auto* recognize = app.add_subcommand("recognize", "classify one photo");
    std::string rec_model, rec_image;
    recognize->add_option("--model", rec_model, "model JSON")->required();
    recognize->add_option("image", rec_image, "photo to classify")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "accuracy on labeled test manifests");
    std::string eval_model;
    std::vector<std::string> eval_manifests;
    std::string eval_csv;
    evaluate->add_option("--model", eval_model, "model JSON")->required();
    evaluate->add_option("manifests", eval_manifests, "labeled test manifests")->required();
    evaluate->add_option("--outcomes", eval_csv, "per-photo outcomes CSV");

    // crosseval
    auto* crosseval = app.add_subcommand("crosseval", "accuracy matrix of models x test sets");
    std::vector<std::string> ce_models, ce_sets;
    std::string ce_csv;
    bool ce_pooled = false;
    crosseval->add_option("--model", ce_models, "model JSON (repeatable)")->required();
    crosseval->add_option("--testset", ce_sets, "test manifest (repeatable)")->required();
    crosseval->add_flag("--pooled", ce_pooled, "append a pooled column over all test sets");
    crosseval->add_option("--out", ce_csv, "matrix CSV output");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "replay a scripted teaching session");
    std::string sim_scenario, sim_out = "session";
    std::uint64_t sim_seed = 0;
    bool sim_has_seed = false;
    bool sim_no_photos = false;
    simulate->add_option("--scenario", sim_scenario, "scenario JSON (policy + scenes)");
    simulate->add_option("--seed", sim_seed, "session seed")->each([&](const std::string&) {
        sim_has_seed = true;
    });
    simulate->add_option("-o,--out", sim_out, "session log directory");
    simulate->add_flag("--no-photos", sim_no_photos, "skip writing PNG photos");

    // serve
    auto* serve = app.add_subcommand("serve", "run the HTTP descriptor/recognition service");
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    std::string serve_state = "service-state";
    serve->add_option("--host", serve_host, "bind address");
    serve->add_option("--port", serve_port, "port (0 picks one)");
    serve->add_option("--state-dir", serve_state, "model persistence directory");

    CLI11_PARSE(app, argc, argv);

    auto opt_path = [](const std::string& s) -> std::optional<fs::path> {
        if (s.empty()) return std::nullopt;
        return fs::path(s);
    };

    if (*describe) {
        return teachset::cli::cmd_describe(describe_manifest, config_path(), describe_out);
    }
    if (*correlate) {
        if (pair_args.size() % 2 != 0) {
            std::cerr << "error: --pair expects summary/annotation path pairs\n";
            return 1;
        }
        std::vector<std::pair<fs::path, fs::path>> pairs;
        for (std::size_t i = 0; i < pair_args.size(); i += 2) {
            pairs.emplace_back(pair_args[i], pair_args[i + 1]);
        }
        return teachset::cli::cmd_correlate(pairs, correlate_out);
    }
    if (*train) {
        std::vector<fs::path> manifests(train_manifests.begin(), train_manifests.end());
        return teachset::cli::cmd_train(manifests, config_path(), model_out);
    }
    if (*recognize) {
        return teachset::cli::cmd_recognize(rec_model, rec_image, config_path());
    }
    if (*evaluate) {
        std::vector<fs::path> manifests(eval_manifests.begin(), eval_manifests.end());
        return teachset::cli::cmd_evaluate(eval_model, manifests, config_path(),
                                           opt_path(eval_csv));
    }
    if (*crosseval) {
        std::vector<fs::path> models(ce_models.begin(), ce_models.end());
        std::vector<fs::path> sets(ce_sets.begin(), ce_sets.end());
        return teachset::cli::cmd_crosseval(models, sets, ce_pooled, config_path(),
                                            opt_path(ce_csv));
    }
    if (*simulate) {
        return teachset::cli::cmd_simulate(
            opt_path(sim_scenario),
            sim_has_seed ? std::optional<std::uint64_t>(sim_seed) : std::nullopt, sim_out,
            config_path(), !sim_no_photos);
    }
    if (*serve) {
        try {
            teachset::io::ToolkitConfig cfg;
            if (config_path()) cfg = teachset::io::load_config(*config_path());
            teachset::service::Service service(cfg, serve_state);
            if (serve_port == 0) {
                const int port = service.start(serve_host);
                std::cout << "listening on http://" << serve_host << ":" << port << "\n";
                // Keep serving until interrupted.
                while (true) std::this_thread::sleep_for(std::chrono::seconds(3600));
            }
            std::cout << "listening on http://" << serve_host << ":" << serve_port << "\n";
            if (!service.listen(serve_host, serve_port)) {
                std::cerr << "error: failed to bind " << serve_host << ":" << serve_port << "\n";
                return 1;
            }
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
