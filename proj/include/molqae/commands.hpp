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
 * Subcommands behind the `molqae` executable. Each throws molqae::Error on
 * failure; run_cli maps errors onto exit codes (2 config/input, 3 numerical).
 */
#pragma once

#include "molqae/io.hpp"
#include "molqae/optim.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string_view>

namespace molqae {

/// Loads and cleans the corpus, writes the vocabulary JSON. Returns the
/// vocabulary hash.
std::string cmd_build_vocab(const std::filesystem::path &corpus_path,
                            const std::filesystem::path &out_path,
                            std::ostream &log);

struct TrainOutcome {
    TrainResult result;
    Checkpoint checkpoint;
};

/**
 * Writes into cfg.out_dir:
 *   metrics.csv      one row per epoch, streamed
 *   checkpoint.json  best parameters plus train/holdout evaluation
 *   manifest.json    config echo, seeds, corpus/vocab fingerprints, version
 *   train.smi, holdout.smi   the split actually used
 *   FAILED           only when training aborts; holds the diagnostic
 * The vocabulary is built from the cleaned corpus when data.vocab does not
 * exist yet.
 */
TrainOutcome cmd_train(const RunConfig &cfg, std::ostream &log);

/// Mean metrics of a checkpoint over a corpus. Molecules with tokens
/// missing from the vocabulary are skipped and counted.
[[nodiscard]] EvalStats cmd_eval(const std::filesystem::path &checkpoint_path,
                                 const std::filesystem::path &corpus_path,
                                 const std::filesystem::path &vocab_path);

/// Mid-state amplitudes, ancilla-zero mass and the latent amplitudes
/// conditioned on the ancilla register reading zero.
[[nodiscard]] nlohmann::json cmd_encode(const std::filesystem::path &checkpoint_path,
                                        const std::filesystem::path &vocab_path,
                                        std::string_view smiles);

[[nodiscard]] std::size_t cmd_params(unsigned layers, unsigned latent);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace molqae
