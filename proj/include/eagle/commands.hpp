#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eagle/io.hpp"
#include "eagle/model.hpp"
#include "eagle/spectra.hpp"

namespace eagle::cli {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;
using io::Dataset;

/// Config keys mirror TrainConfig field names; "k" may be the string "inf"
/// to request exact propagation. Unknown keys are rejected.
TrainConfig config_from_json(const json& j, TrainConfig base = {});
json config_to_json(const TrainConfig& cfg);
TrainConfig load_config(const std::optional<std::filesystem::path>& path);

/// Finite doubles as numbers, infinities as "inf"/"-inf", NaN as null.
json number(double v);

json report_to_json(const SpectralReport& r);
json metrics_to_json(const MetricReport& r, const std::vector<std::string>& class_names);

Dataset cmd_ingest(const std::filesystem::path& edges, const std::filesystem::path& attrs,
                   const std::optional<std::filesystem::path>& labels, const std::filesystem::path& out);

/// Propagates the raw attributes (identity Theta) and writes an EABGZ1 file.
Matrix cmd_embed(const Dataset& ds, const TrainConfig& cfg, const std::filesystem::path& out);

/// Trains, writes weights plus manifest.json into `ckpt_dir`, and returns the
/// metrics JSON (validation at the best epoch and final test metrics).
json cmd_train(const Dataset& ds, const TrainConfig& cfg, const std::filesystem::path& ckpt_dir);

/// Re-evaluates a checkpoint on one split partition ("train", "val", "test").
json cmd_eval(const Dataset& ds, const std::filesystem::path& ckpt_dir, const std::string& subset = "test");

json cmd_diagnose(const Dataset& ds, const TrainConfig& cfg);

/// One parameter varied over `values` for each method. Methods are "ffp",
/// "fc", or "dvffp-<combinator>". A value of "inf" is accepted for k.
struct SweepSpec {
  std::string param = "alpha";
  std::vector<std::string> values;
  std::vector<std::string> methods{"ffp"};
};

SweepSpec sweep_from_json(const json& j);

inline constexpr char kSweepHeader[] = "method,param,value,ap,auc";

/// Returns the CSV text (header plus one row per method and value).
std::string cmd_sweep(const Dataset& ds, const TrainConfig& cfg, const SweepSpec& spec);

/// Parses argv and dispatches. Returns the process exit code: 0 success,
/// 2 input or validation error, 3 numerical failure.
int run(int argc, char** argv);

}  // namespace eagle::cli
