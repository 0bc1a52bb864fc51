// Copyright 2026 The molqae Authors
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
/**
 * @file
 * Run configuration, checkpoints and metrics files.
 *
 * Config files are flat "key.path = value" lines; '#' starts a comment and
 * unknown keys are rejected. Every train.* key defaults to TrainConfig's
 * defaults.
 */
#pragma once

#include "molqae/circuit.hpp"
#include "molqae/objective.hpp"
#include "molqae/optim.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace molqae {

struct RunConfig {
    std::filesystem::path data_path;
    std::filesystem::path vocab_path;
    std::filesystem::path out_dir;
    /// Fraction of the cleaned corpus used for training; 1 disables the holdout.
    double train_fraction = 0.9;
    ArchConfig arch;
    TrainConfig train;
    bool has_latent = false;
    bool has_layers = false;

    /// Throws ConfigError when a required key is still missing.
    void require_complete() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

[[nodiscard]] RunConfig parse_run_config(std::string_view text);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path &path);

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string format_double(double x);
/// Strict inverse of format_double; throws InputError.
[[nodiscard]] double parse_double(std::string_view s);

inline constexpr std::string_view kMetricsHeader =
    "epoch,avg_loss,avg_fidelity,avg_ancilla_dev,lr,wall_time_s";

[[nodiscard]] std::string format_metrics_row(const EpochRecord &rec);

struct EvalStats {
    BatchMetrics metrics;
    std::size_t n_skipped = 0;
    [[nodiscard]] nlohmann::json to_json() const;
};

struct Checkpoint {
    static constexpr int kFormatVersion = 1;

    ArchConfig arch;
    ParamVector params;
    std::string vocab_hash;
    TrainConfig train;
    unsigned best_epoch = 0;
    std::optional<EpochRecord> best_record;
    std::optional<EvalStats> train_eval;
    std::optional<EvalStats> holdout_eval;

    [[nodiscard]] nlohmann::json to_json() const;
    static Checkpoint from_json(const nlohmann::json &doc);
    void save(const std::filesystem::path &path) const;
    static Checkpoint load(const std::filesystem::path &path);
};

[[nodiscard]] nlohmann::json train_config_json(const TrainConfig &cfg);

[[nodiscard]] std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

} // namespace molqae
