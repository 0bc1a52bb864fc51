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
#include "molqae/commands.hpp"

#include "molqae/data.hpp"
#include "molqae/error.hpp"
#include "molqae/smiles.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <fstream>
#include <optional>

namespace molqae {
namespace {

#ifndef MOLQAE_VERSION
#define MOLQAE_VERSION "dev"
#endif

struct Featurized {
    std::vector<FeatureVector> features;
    std::vector<std::string> smiles;
    std::size_t n_skipped = 0;
    std::size_t n_truncated = 0;
};

Featurized featurize_corpus(const Corpus &corpus, const TokenVocab &vocab) {
    Featurized out;
    for (const Record &r : corpus.records) {
        const auto tokens = tokenize(r.smiles);
        const bool known = std::all_of(tokens.begin(), tokens.end(), [&](auto &t) {
            return vocab.contains(t);
        });
        if (!known) {
            ++out.n_skipped;
            continue;
        }
        out.n_truncated += tokens.size() > kFeatureLength ? 1 : 0;
        out.features.push_back(featurize(tokens, vocab));
        out.smiles.push_back(r.smiles);
    }
    return out;
}

std::string join_lines(const std::vector<std::string> &lines) {
    std::string s;
    for (const auto &l : lines) {
        s += l;
        s += '\n';
    }
    return s;
}

Corpus load_clean(const std::filesystem::path &path, CleanReport *report = nullptr) {
    auto [corpus, rep] = clean(load_corpus(path));
    if (report) {
        *report = rep;
    }
    return corpus;
}

nlohmann::json amplitudes_json(std::span<const cplx> amps) {
    auto arr = nlohmann::json::array();
    for (const cplx &a : amps) {
        arr.push_back({a.real(), a.imag()});
    }
    return arr;
}

} // namespace

std::string cmd_build_vocab(const std::filesystem::path &corpus_path,
                            const std::filesystem::path &out_path,
                            std::ostream &log) {
    CleanReport report;
    const Corpus corpus = load_clean(corpus_path, &report);
    if (corpus.size() == 0) {
        throw ConfigError("corpus '" + corpus_path.string() +
                          "' has no usable molecules");
    }
    const TokenVocab vocab = build_vocab(corpus.smiles());
    write_file(out_path, vocab.to_json());
    log << "vocabulary: " << vocab.size() << " tokens from " << report.kept
        << " molecules (" << report.dup_dropped << " duplicates, "
        << report.invalid_dropped << " invalid dropped) -> " << out_path.string()
        << "\n";
    return vocab.hash();
}

TrainOutcome cmd_train(const RunConfig &cfg, std::ostream &log) {
    cfg.require_complete();
    if (cfg.arch.n_qubits != kMolQubits) {
        throw ConfigError("molecular training needs 8 qubits");
    }
    CleanReport report;
    const Corpus corpus = load_clean(cfg.data_path, &report);
    if (corpus.size() == 0) {
        throw ConfigError("corpus '" + cfg.data_path.string() +
                          "' has no usable molecules");
    }

    bool vocab_built = false;
    std::optional<TokenVocab> vocab;
    if (std::filesystem::exists(cfg.vocab_path)) {
        vocab = TokenVocab::from_json(read_file(cfg.vocab_path));
    } else {
        vocab = build_vocab(corpus.smiles());
        write_file(cfg.vocab_path, vocab->to_json());
        vocab_built = true;
    }

    Corpus train_set = corpus;
    Corpus holdout_set{{}, corpus.source, corpus.content_hash};
    if (cfg.train_fraction < 1.0) {
        std::tie(train_set, holdout_set) =
            split(corpus, cfg.train.seed, cfg.train_fraction);
    }
    const Featurized train_data = featurize_corpus(train_set, *vocab);
    const Featurized holdout_data = featurize_corpus(holdout_set, *vocab);
    if (train_data.features.empty()) {
        throw ConfigError("no training molecules are covered by the vocabulary");
    }

    std::filesystem::create_directories(cfg.out_dir);
    write_file(cfg.out_dir / "train.smi", join_lines(train_data.smiles));
    write_file(cfg.out_dir / "holdout.smi", join_lines(holdout_data.smiles));
    std::filesystem::remove(cfg.out_dir / "FAILED");

    nlohmann::json manifest;
    manifest["version"] = MOLQAE_VERSION;
    manifest["config"] = cfg.to_json();
    manifest["seeds"] = {{"init", cfg.train.seed},
                         {"split", cfg.train.seed},
                         {"batch_order", "derive_seed(seed, epoch)"}};
    manifest["corpus"] = nlohmann::json::parse(report.to_json());
    manifest["corpus"]["source"] = corpus.source;
    manifest["vocab"] = {{"path", cfg.vocab_path.string()},
                         {"hash", vocab->hash()},
                         {"size", vocab->size()},
                         {"built_here", vocab_built}};
    manifest["split"] = {{"n_train", train_data.features.size()},
                         {"n_holdout", holdout_data.features.size()},
                         {"n_skipped_unknown_tokens",
                          train_data.n_skipped + holdout_data.n_skipped},
                         {"n_truncated", train_data.n_truncated + holdout_data.n_truncated}};
    manifest["param_count"] = param_count(cfg.arch);
    manifest["threads"] = omp_get_max_threads();
    write_file(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");

    const auto states = prepare_states(train_data.features);
    std::ofstream metrics(cfg.out_dir / "metrics.csv", std::ios::trunc);
    if (!metrics) {
        throw InputError("cannot write metrics.csv in " + cfg.out_dir.string());
    }
    metrics << kMetricsHeader << '\n' << std::flush;

    log << "training L=" << cfg.arch.n_layers << " latent=" << cfg.arch.n_latent
        << " params=" << param_count(cfg.arch) << " on " << states.size()
        << " molecules (" << to_string(cfg.train.engine) << ")\n";

    TrainResult result;
    try {
        result = train(states, cfg.arch, cfg.train, [&](const EpochRecord &rec) {
            metrics << format_metrics_row(rec) << '\n' << std::flush;
            log << "epoch " << rec.epoch << " loss " << rec.avg_loss << " fidelity "
                << rec.avg_fidelity << " ancilla " << rec.avg_ancilla_dev << " lr "
                << rec.lr << "\n";
        });
    } catch (const Error &e) {
        write_file(cfg.out_dir / "FAILED", std::string(e.what()) + "\n");
        throw;
    }

    const Circuit circuit = build_circuit(cfg.arch);
    const ObjectiveConfig objective{cfg.train.lambda_weight};
    Checkpoint ck;
    ck.arch = cfg.arch;
    ck.params = result.best_params;
    ck.vocab_hash = vocab->hash();
    ck.train = cfg.train;
    ck.best_epoch = result.best_epoch;
    ck.best_record = result.history.at(result.best_epoch);
    ck.train_eval = EvalStats{batch_objective(circuit, states, ck.params, objective),
                              train_data.n_skipped};
    if (!holdout_data.features.empty()) {
        const auto hold = prepare_states(holdout_data.features);
        ck.holdout_eval = EvalStats{batch_objective(circuit, hold, ck.params, objective),
                                    holdout_data.n_skipped};
    }
    ck.save(cfg.out_dir / "checkpoint.json");
    log << "best epoch " << result.best_epoch << " train fidelity "
        << ck.train_eval->metrics.mean_fidelity << "\n";
    return {std::move(result), std::move(ck)};
}

EvalStats cmd_eval(const std::filesystem::path &checkpoint_path,
                   const std::filesystem::path &corpus_path,
                   const std::filesystem::path &vocab_path) {
    const Checkpoint ck = Checkpoint::load(checkpoint_path);
    const TokenVocab vocab = TokenVocab::from_json(read_file(vocab_path));
    if (vocab.hash() != ck.vocab_hash) {
        throw VocabError("vocabulary hash " + vocab.hash() +
                         " does not match the checkpoint's " + ck.vocab_hash);
    }
    const Featurized data = featurize_corpus(load_clean(corpus_path), vocab);
    if (data.features.empty()) {
        throw ConfigError("no molecules in '" + corpus_path.string() +
                          "' can be evaluated");
    }
    const auto states = prepare_states(data.features);
    return {batch_objective(build_circuit(ck.arch), states, ck.params,
                            ObjectiveConfig{ck.train.lambda_weight}),
            data.n_skipped};
}

nlohmann::json cmd_encode(const std::filesystem::path &checkpoint_path,
                          const std::filesystem::path &vocab_path,
                          std::string_view smiles) {
    const Checkpoint ck = Checkpoint::load(checkpoint_path);
    const TokenVocab vocab = TokenVocab::from_json(read_file(vocab_path));
    if (vocab.hash() != ck.vocab_hash) {
        throw VocabError("vocabulary hash " + vocab.hash() +
                         " does not match the checkpoint's " + ck.vocab_hash);
    }
    const StateVector input = encode_smiles(smiles, vocab);
    const StateVector mid = encode(build_circuit(ck.arch), input, ck.params);
    const double dev = ancilla_deviation(mid, ck.arch);
    const std::size_t keep = std::size_t{1} << ck.arch.n_latent;
    double mass = 0.0;
    for (std::size_t k = 0; k < keep; ++k) {
        mass += std::norm(mid[k]);
    }

    nlohmann::json doc;
    doc["smiles"] = std::string(smiles);
    doc["n_latent"] = ck.arch.n_latent;
    doc["mid_amplitudes"] = amplitudes_json(mid.amps());
    doc["ancilla_zero_mass"] = mass;
    doc["ancilla_deviation"] = dev;
    if (mass > 0.0) {
        std::vector<cplx> latent(mid.amps().begin(),
                                 mid.amps().begin() + static_cast<std::ptrdiff_t>(keep));
        const double scale = 1.0 / std::sqrt(mass);
        for (cplx &a : latent) {
            a *= scale;
        }
        doc["latent_amplitudes"] = amplitudes_json(latent);
    } else {
        doc["latent_amplitudes"] = nullptr;
    }
    return doc;
}

std::size_t cmd_params(unsigned layers, unsigned latent) {
    ArchConfig arch;
    arch.n_layers = layers;
    arch.n_latent = latent;
    return param_count(arch);
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"molqae: quantum autoencoder for SMILES molecules"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    std::string data;
    std::string vocab;
    std::string out_path;
    std::string config;
    std::string checkpoint;
    std::string engine;
    std::string smiles;
    std::optional<std::uint64_t> seed;
    unsigned layers = 0;
    unsigned latent = 0;

    auto *bv = app.add_subcommand("build-vocab", "build a token vocabulary");
    bv->add_option("--data", data, "corpus file")->required();
    bv->add_option("--out", out_path, "vocabulary JSON to write")->required();

    auto *tr = app.add_subcommand("train", "train an autoencoder");
    tr->add_option("--config", config, "run configuration file")->required();
    tr->add_option("--data", data, "override data.path");
    tr->add_option("--vocab", vocab, "override data.vocab");
    tr->add_option("--out", out_path, "override out.dir");
    tr->add_option("--seed", seed, "override train.seed");
    tr->add_option("--grad-engine", engine, "adjoint | parameter-shift | finite-diff");

    auto *ev = app.add_subcommand("eval", "evaluate a checkpoint on a corpus");
    ev->add_option("--checkpoint", checkpoint)->required();
    ev->add_option("--data", data)->required();
    ev->add_option("--vocab", vocab)->required();
    ev->add_option("--out", out_path, "also write the report here");

    auto *en = app.add_subcommand("encode", "dump the latent state of one molecule");
    en->add_option("--checkpoint", checkpoint)->required();
    en->add_option("--vocab", vocab)->required();
    en->add_option("smiles", smiles, "SMILES string")->required();

    auto *pc = app.add_subcommand("params", "trainable parameter count");
    pc->add_option("--layers", layers)->required()->check(CLI::PositiveNumber);
    pc->add_option("--latent", latent)->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (threads > 0) {
        omp_set_num_threads(threads);
    }

    try {
        if (*bv) {
            out << cmd_build_vocab(data, out_path, err) << "\n";
        } else if (*tr) {
            RunConfig cfg = load_run_config(config);
            if (!data.empty()) {
                cfg.data_path = data;
            }
            if (!vocab.empty()) {
                cfg.vocab_path = vocab;
            }
            if (!out_path.empty()) {
                cfg.out_dir = out_path;
            }
            if (seed) {
                cfg.train.seed = *seed;
            }
            if (!engine.empty()) {
                cfg.train.engine = parse_gradient_engine(engine);
            }
            if (!cfg.data_path.empty() && !std::filesystem::exists(cfg.data_path)) {
                throw ConfigError("data path '" + cfg.data_path.string() +
                                  "' does not exist");
            }
            const auto outcome = cmd_train(cfg, err);
            out << (cfg.out_dir / "checkpoint.json").string() << "\n";
            (void)outcome;
        } else if (*ev) {
            const EvalStats stats = cmd_eval(checkpoint, data, vocab);
            const std::string report = stats.to_json().dump(2) + "\n";
            if (!out_path.empty()) {
                write_file(out_path, report);
            }
            out << report;
        } else if (*en) {
            out << cmd_encode(checkpoint, vocab, smiles).dump(2) << "\n";
        } else if (*pc) {
            out << cmd_params(layers, latent) << "\n";
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace molqae
