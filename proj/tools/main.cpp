#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cryptoforecast/error.hpp"

namespace cf = cryptoforecast;

int main(int argc, char** argv) {
    CLI::App app{"Cross-coin correlation, causality and price forecasting toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::string> out_dir;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed, "override config seed");
    app.add_option("--jobs", jobs, "worker threads for pairwise analyses");
    app.add_option("--out-dir", out_dir, "override config out_dir");

    std::string resolution = "daily";
    std::optional<std::string> target;
    std::optional<std::string> model_dir;
    std::optional<int> lag;
    std::string direction = "forward";

    auto* ingest = app.add_subcommand("ingest", "load, align and export a price panel");
    ingest->add_option("--resolution", resolution, "panel resolution: daily or minute");

    auto* correlate =
        app.add_subcommand("correlate", "correlograms and cumulative correlation trends");
    std::optional<std::string> mode;
    correlate->add_option("--mode", mode, "composite or per-variable");

    app.add_subcommand("stationarity", "ADF/KPSS tests and integration orders");

    auto* causality = app.add_subcommand("causality", "Toda-Yamamoto Granger-causality report");
    causality->add_option("--direction", direction,
                          "forward (altcoin -> maincoin) or reverse");

    app.add_subcommand("select-predictors",
                       "filter altcoins by correlation threshold, then causality");

    auto* train = app.add_subcommand("train", "train GBT/LSTM/GRU with early stopping");
    auto* predict = app.add_subcommand("predict", "predict the test slice from saved models");
    auto* evaluate = app.add_subcommand("evaluate", "score saved models against baselines");
    auto* report = app.add_subcommand("report", "end-to-end experiment report");
    for (auto* cmd : {train, predict, evaluate, report}) {
        cmd->add_option("--target", target, "override target coin");
        cmd->add_option("--model-dir", model_dir, "model directory");
        cmd->add_option("--lag", lag, "shift features back this many steps");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        cfcli::RunConfig config = cf::config::load_config(config_path);
        if (seed) config.seed = *seed;
        if (jobs) config.jobs = *jobs;
        if (out_dir) config.out_dir = *out_dir;
        if (target) config.target = *target;
        if (model_dir)
            config.model_dir = *model_dir;
        else if (out_dir)
            config.model_dir = config.out_dir + "/models";
        if (lag) config.lag = *lag;
        if (direction == "reverse")
            config.granger.reverse = true;
        else if (direction != "forward")
            throw cf::ConfigError("--direction must be forward or reverse");

        if (ingest->parsed()) return cfcli::cmd_ingest(config, resolution);
        if (correlate->parsed()) {
            if (mode) {
                if (*mode != "composite" && *mode != "per-variable")
                    throw cf::ConfigError("--mode must be composite or per-variable");
                config.correlation_mode = *mode;
            }
            return cfcli::cmd_correlate(config);
        }
        if (app.get_subcommand("stationarity")->parsed()) return cfcli::cmd_stationarity(config);
        if (causality->parsed()) return cfcli::cmd_causality(config);
        if (app.get_subcommand("select-predictors")->parsed())
            return cfcli::cmd_select_predictors(config);
        if (train->parsed()) return cfcli::cmd_train(config);
        if (predict->parsed()) return cfcli::cmd_predict(config);
        if (evaluate->parsed()) return cfcli::cmd_evaluate(config);
        if (report->parsed()) return cfcli::cmd_report(config);
        throw cf::ConfigError("no subcommand given");
    } catch (const cf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const cf::ModelFileError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return 4;
    } catch (const cf::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const cf::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
