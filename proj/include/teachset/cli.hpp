#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace teachset::cli {

/// CLI command bodies. Each returns a process exit status and reports
/// failures as a single machine-parseable "error: ..." line on stderr, so
/// main() stays a thin argument parser and tests can call commands directly.

int cmd_describe(const std::filesystem::path& manifest_path,
                 const std::optional<std::filesystem::path>& config_path,
                 const std::filesystem::path& out_dir);

int cmd_correlate(
    const std::vector<std::pair<std::filesystem::path, std::filesystem::path>>& pairs,
    const std::filesystem::path& out_dir);

int cmd_train(const std::vector<std::filesystem::path>& manifest_paths,
              const std::optional<std::filesystem::path>& config_path,
              const std::filesystem::path& model_out);

int cmd_recognize(const std::filesystem::path& model_path,
                  const std::filesystem::path& image_path,
                  const std::optional<std::filesystem::path>& config_path);

int cmd_evaluate(const std::filesystem::path& model_path,
                 const std::vector<std::filesystem::path>& manifest_paths,
                 const std::optional<std::filesystem::path>& config_path,
                 const std::optional<std::filesystem::path>& outcomes_csv);

int cmd_crosseval(const std::vector<std::filesystem::path>& model_paths,
                  const std::vector<std::filesystem::path>& manifest_paths, bool pooled,
                  const std::optional<std::filesystem::path>& config_path,
                  const std::optional<std::filesystem::path>& matrix_csv);

int cmd_simulate(const std::optional<std::filesystem::path>& scenario_path,
                 std::optional<std::uint64_t> seed_override,
                 const std::filesystem::path& out_dir,
                 const std::optional<std::filesystem::path>& config_path, bool save_photos);

}  // namespace teachset::cli
