#include "wellcast/errors.hpp"
#include "wellcast/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration file (JSON)")
        ->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--seed", opts.seed, "global seed (overrides the config seed)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_flag("--verbose", opts.verbose, "echo the run log to stdout");
}

int run(const CommonOpts& opts, const std::vector<std::string>& stage_override) {
    wellcast::RunConfig cfg = wellcast::parse_config(opts.config_path);
    if (!opts.out_dir.empty()) {
        cfg.out_dir = opts.out_dir;
    }
    if (opts.seed_set) {
        cfg.seed = opts.seed;
        cfg.grid.seed = opts.seed;
    }
    if (opts.verbose) {
        cfg.verbose = true;
    }
    if (!stage_override.empty()) {
        cfg.stages = stage_override;
    }
    for (const auto& w : cfg.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    if (cfg.verbose) {
        for (const auto& d : cfg.applied_defaults) {
            std::printf("default: %s\n", d.c_str());
        }
    }
    const wellcast::Manifest manifest = wellcast::execute_pipeline(cfg);
    if (cfg.verbose) {
        for (const auto& f : manifest.files) {
            std::printf("wrote %s (%s)\n", f.path.c_str(), f.sha256.substr(0, 12).c_str());
        }
    }
    std::printf("ok: %zu artifacts in %s\n", manifest.files.size(), cfg.out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wellcast - data-driven production forecasting for petroleum fields"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::vector<std::string> stages;
    };
    const std::vector<Sub> subs = {
        {"synth", "generate a synthetic field dataset", {"synth"}},
        {"condition", "resample, trim, and smooth a dataset", {"condition"}},
        {"reshape", "export the supervised lag-window matrix", {"reshape"}},
        {"train", "fit the configured estimator", {"train"}},
        {"forecast", "recursive forecast with an injection schedule", {"forecast"}},
        {"evaluate", "walk-forward rolling evaluation", {"evaluate"}},
        {"gridsearch", "hyperparameter grid search", {"gridsearch"}},
        {"decline", "fit decline-curve baselines per producer", {"decline"}},
        {"plot", "emit SVG charts for existing artifacts", {"plot"}},
        {"pipeline", "run the stages listed in the config", {}},
    };

    std::vector<CommonOpts> opts(subs.size());
    std::vector<CLI::App*> cmds(subs.size());
    for (size_t i = 0; i < subs.size(); ++i) {
        cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmds[i], opts[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (size_t i = 0; i < subs.size(); ++i) {
        if (!cmds[i]->parsed()) {
            continue;
        }
        try {
            return run(opts[i], subs[i].stages);
        } catch (const wellcast::ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const wellcast::DataError& e) {
            std::fprintf(stderr, "data error: %s\n", e.what());
            return 3;
        } catch (const wellcast::NumericError& e) {
            std::fprintf(stderr, "numerical error: %s\n", e.what());
            return 4;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 4;
        }
    }
    return 0;
}
