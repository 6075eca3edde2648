#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "msst/errors.hpp"
#include "msst/pipeline.hpp"
#include "msst/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitSelfTest = 3;

struct CommonArgs {
  std::string config_path;
  std::string manifest_path;
  std::string out_dir;
  std::string scenario;
  std::string feature_mode;
  std::size_t workers = 0;
  bool have_seed = false;
  std::uint64_t seed = 0;
  bool synthetic = false;
  std::vector<std::string> overrides;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key=value configuration file");
  cmd->add_option("--manifest", args.manifest_path, "trial manifest CSV");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--workers", args.workers, "worker thread count");
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&args](const std::uint64_t& v) {
        args.seed = v;
        args.have_seed = true;
      },
      "random seed");
  cmd->add_option("--scenario", args.scenario, "inter or intra:<k>");
  cmd->add_option("--feature-mode", args.feature_mode, "joint or elementwise");
  cmd->add_flag("--synthetic", args.synthetic, "generate synthetic trials instead of a manifest");
  cmd->add_option("--set", args.overrides, "extra key=value config overrides")->take_all();
}

msst::PipelineConfig resolve_config(const CommonArgs& args) {
  msst::PipelineConfig config;
  if (!args.config_path.empty()) config = msst::load_config_file(args.config_path);
  if (!args.manifest_path.empty()) config.manifest_path = args.manifest_path;
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (args.workers > 0) config.workers = args.workers;
  if (args.have_seed) config.seed = args.seed;
  if (!args.scenario.empty()) msst::apply_config_entry(config, "scenario", args.scenario);
  if (!args.feature_mode.empty())
    msst::apply_config_entry(config, "feature.mode", args.feature_mode);
  if (args.synthetic) config.synthetic = true;
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw msst::ConfigError("--set expects key=value, got: " + kv);
    msst::apply_config_entry(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const msst::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const msst::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multivariate synchrosqueezing feature analysis"};
  app.require_subcommand(1);

  CommonArgs pipeline_args, features_args, kwtest_args, synth_args;
  std::string kwtest_features, boxplot_features, boxplot_feature_name, boxplot_out;
  bool boxplot_raw = false;

  CLI::App* pipeline = app.add_subcommand("pipeline", "full run: features, tests, plots");
  add_common_options(pipeline, pipeline_args);

  CLI::App* features = app.add_subcommand("features", "feature extraction only");
  add_common_options(features, features_args);

  CLI::App* kwtest = app.add_subcommand("kwtest", "Kruskal-Wallis analysis of a feature table");
  add_common_options(kwtest, kwtest_args);
  kwtest->add_option("--features", kwtest_features, "features.csv to analyze")->required();

  CLI::App* boxplot = app.add_subcommand("boxplot", "render one feature's box plot as SVG");
  boxplot->add_option("--features", boxplot_features, "features.csv to plot")->required();
  boxplot->add_option("--feature", boxplot_feature_name, "mean, variance, skewness or kurtosis")
      ->required();
  boxplot->add_option("--out", boxplot_out, "output SVG path")->required();
  boxplot->add_flag("--raw", boxplot_raw, "plot raw values instead of z-scored");

  CLI::App* synth = app.add_subcommand("synth", "write synthetic trial CSVs and a manifest");
  add_common_options(synth, synth_args);

  CLI::App* selftest = app.add_subcommand("selftest", "run embedded analytic checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (pipeline->parsed()) {
    return run_guarded([&]() {
      const auto config = resolve_config(pipeline_args);
      const auto result = msst::cmd_pipeline(config);
      std::cout << "wrote " << result.out_dir.string() << ": " << result.feature_rows
                << " feature rows, " << result.overall_tests << " overall tests, "
                << result.pairwise_tests << " pairwise tests\n";
      return kExitOk;
    });
  }
  if (features->parsed()) {
    return run_guarded([&]() {
      const auto config = resolve_config(features_args);
      const auto result = msst::cmd_features(config);
      std::cout << "wrote " << result.out_dir.string() << ": " << result.feature_rows
                << " feature rows\n";
      return kExitOk;
    });
  }
  if (kwtest->parsed()) {
    return run_guarded([&]() {
      const auto config = resolve_config(kwtest_args);
      const auto result = msst::cmd_kwtest(config, kwtest_features);
      std::cout << "wrote " << result.out_dir.string() << ": " << result.overall_tests
                << " overall tests, " << result.pairwise_tests << " pairwise tests\n";
      return kExitOk;
    });
  }
  if (boxplot->parsed()) {
    return run_guarded([&]() {
      msst::cmd_boxplot(boxplot_features, boxplot_feature_name, boxplot_out, !boxplot_raw);
      std::cout << "wrote " << boxplot_out << "\n";
      return kExitOk;
    });
  }
  if (synth->parsed()) {
    return run_guarded([&]() {
      const auto config = resolve_config(synth_args);
      const std::string dir = config.out_dir.empty() ? "synth-trials" : config.out_dir;
      msst::cmd_synth(config, dir);
      std::cout << "wrote synthetic trials to " << dir << "\n";
      return kExitOk;
    });
  }
  if (selftest->parsed()) {
    const auto checks = msst::run_selftest();
    const bool ok = msst::report_selftest(checks, std::cout);
    return ok ? kExitOk : kExitSelfTest;
  }
  return kExitConfig;
}
