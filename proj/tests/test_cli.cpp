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
#include "molqae/circuit.hpp"
#include "molqae/commands.hpp"
#include "molqae/error.hpp"
#include "molqae/io.hpp"
#include "molqae/rng.hpp"
#include "molqae/smiles.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>

using namespace molqae;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "molqae");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string &tag) {
        path = fs::temp_directory_path() /
               ("molqae_" + tag + "_" + std::to_string(fnv1a64(tag) & 0xFFFFFF));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    [[nodiscard]] std::string operator/(const std::string &name) const {
        return (path / name).string();
    }
};

const char *const kTinyCorpus = "smiles\nCCO\nCC(=O)Cl\nc1ccccc1\nN#CC\nCCO\nOC=O\nC?C\n";

std::string tiny_config(const TempDir &d, unsigned epochs) {
    return "# tiny run\n"
           "data.path = " + (d / "corpus.csv") + "\n"
           "data.vocab = " + (d / "vocab.json") + "\n"
           "data.train_fraction = 0.8\n"
           "arch.latent = 4\n"
           "arch.layers = 5\n"
           "train.max_epochs = " + std::to_string(epochs) + "\n"
           "train.patience = " + std::to_string(epochs) + "\n"
           "train.batch_size = 2\n"
           "train.lr = 0.01\n"
           "out.dir = " + (d / "run") + "\n";
}

std::vector<std::string> csv_rows(const std::string &text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        rows.push_back(line);
    }
    return rows;
}

std::vector<double> csv_column(const std::string &row) {
    std::vector<double> out;
    std::istringstream in(row);
    for (std::string cell; std::getline(in, cell, ',');) {
        out.push_back(parse_double(cell));
    }
    return out;
}

} // namespace

TEST_CASE("params command reproduces published counts") {
    struct Row {
        const char *layers;
        const char *latent;
        const char *want;
    };
    for (const Row r : {Row{"5", "1", "549\n"}, Row{"25", "4", "2623\n"},
                        Row{"10", "7", "1057\n"}}) {
        const auto run = cli({"params", "--layers", r.layers, "--latent", r.latent});
        CHECK(run.code == 0);
        CHECK(run.out == r.want);
    }
    CHECK(cli({"params", "--layers", "5", "--latent", "8"}).code == 2);
    CHECK(cli({"params", "--layers", "0", "--latent", "4"}).code == 2);
    CHECK(cli({"params", "--layers", "5"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("config parsing is strict") {
    const auto cfg = parse_run_config("data.path = a.smi # trailing\n"
                                      "data.vocab=v.json\n"
                                      "arch.latent = 3\n"
                                      "arch.layers = 10\n"
                                      "train.lr = 0.05\n"
                                      "train.grad_engine = parameter-shift\n"
                                      "out.dir = out\n");
    CHECK(cfg.data_path == "a.smi");
    CHECK(cfg.arch.n_latent == 3);
    CHECK(cfg.arch.n_layers == 10);
    CHECK(cfg.train.base_lr == 0.05);
    CHECK(cfg.train.engine == GradientEngine::ParameterShift);
    CHECK(cfg.train.batch_size == 1024);
    CHECK(cfg.train.seed == 42);
    CHECK(cfg.train_fraction == 0.9);
    CHECK_NOTHROW(cfg.require_complete());

    CHECK_THROWS_AS((void)parse_run_config("train.learning_rate = 1\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("arch.layers = 5\narch.layers = 6\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("arch.layers =\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("arch.layers 5\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("arch.layers = five\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("arch.layers = -1\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("train.lr = 1e-3x\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_run_config("train.grad_engine = spsa\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("arch.layers = 5\n").require_complete(), ConfigError);
    CHECK_THROWS_AS((void)load_run_config("/nonexistent/molqae.conf"), ConfigError);
}

TEST_CASE("doubles round trip through their decimal form") {
    SplitMix64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(rng.next_open01() - 0.5, static_cast<int>(rng.next_below(80)) - 40);
        CHECK(parse_double(format_double(x)) == x);
    }
    for (double x : {0.0, -0.0, 1.0, std::numbers::pi, 1e-300, -1.7976931348623157e308}) {
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK_THROWS_AS((void)parse_double("1.5abc"), InputError);
    CHECK_THROWS_AS((void)parse_double(""), InputError);
}

TEST_CASE("metrics row format") {
    EpochRecord r;
    r.epoch = 3;
    r.avg_loss = 0.25;
    r.avg_fidelity = 0.75;
    r.avg_ancilla_dev = 0.5;
    r.lr = 0.001;
    r.wall_time_s = 1.5;
    CHECK(format_metrics_row(r) == "3,0.25,0.75,0.5,0.001,1.5");
}

TEST_CASE("checkpoint round trip is bitwise") {
    TempDir d("ckpt");
    Checkpoint ck;
    ck.arch = ArchConfig{8, 3, 5};
    ck.params = init_params(ck.arch, 9);
    ck.params[0] = 1e-310;
    ck.params[1] = -0.0;
    ck.params[2] = std::nextafter(1.0, 2.0);
    ck.vocab_hash = "0123456789abcdef";
    ck.train.seed = 1234567890123ULL;
    ck.best_epoch = 4;
    ck.save(d / "ck.json");
    const auto back = Checkpoint::load(d / "ck.json");
    REQUIRE(back.params.size() == ck.params.size());
    for (std::size_t k = 0; k < ck.params.size(); ++k) {
        CHECK(std::signbit(back.params[k]) == std::signbit(ck.params[k]));
        CHECK(back.params[k] == ck.params[k]);
    }
    CHECK(back.arch == ck.arch);
    CHECK(back.vocab_hash == ck.vocab_hash);
    CHECK(back.train.seed == ck.train.seed);
    CHECK(back.best_epoch == 4);

    auto doc = nlohmann::json::parse(read_file(d / "ck.json"));
    CHECK(doc.at("params")[0].is_string());
    doc["params"].erase(doc["params"].begin());
    CHECK_THROWS_AS((void)Checkpoint::from_json(doc), InputError);
    CHECK_THROWS_AS((void)Checkpoint::load(d / "missing.json"), InputError);
}

TEST_CASE("build-vocab is byte stable") {
    TempDir d("vocab");
    write_file(d / "corpus.smi", "CCO\nCC(=O)Cl\nc1ccccc1\n");
    const auto a = cli({"build-vocab", "--data", d / "corpus.smi", "--out", d / "a.json"});
    const auto b = cli({"build-vocab", "--data", d / "corpus.smi", "--out", d / "b.json"});
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(read_file(d / "a.json") == read_file(d / "b.json"));
    CHECK(a.out == b.out);
    CHECK(a.out.size() == 17);
    const auto v = TokenVocab::from_json(read_file(d / "a.json"));
    CHECK(v.tokens() == std::vector<std::string>{"<PAD>", "(", ")", "1", "=", "C", "Cl", "O", "c"});

    write_file(d / "empty.smi", "");
    CHECK(cli({"build-vocab", "--data", d / "empty.smi", "--out", d / "c.json"}).code == 2);
    write_file(d / "junk.smi", "C?\n!!\n");
    CHECK(cli({"build-vocab", "--data", d / "junk.smi", "--out", d / "c.json"}).code == 2);
    CHECK(cli({"build-vocab", "--data", d / "none.smi", "--out", d / "c.json"}).code == 2);
}

TEST_CASE("train, eval and encode pipeline") {
    TempDir d("pipeline");
    write_file(d / "corpus.csv", kTinyCorpus);
    write_file(d / "run.conf", tiny_config(d, 2));
    const auto tr = cli({"train", "--config", d / "run.conf", "--threads", "1"});
    REQUIRE_MESSAGE(tr.code == 0, tr.err);

    const auto rows = csv_rows(read_file(d / "run/metrics.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == kMetricsHeader);
    const auto r1 = csv_column(rows[1]);
    const auto r2 = csv_column(rows[2]);
    CHECK(r1[0] == 0.0);
    CHECK(r2[0] == 1.0);
    CHECK(r1[4] == 0.01);
    CHECK(r2[4] <= r1[4]);

    const auto manifest = nlohmann::json::parse(read_file(d / "run/manifest.json"));
    CHECK(manifest.at("corpus").at("kept") == 5);
    CHECK(manifest.at("corpus").at("dup_dropped") == 1);
    CHECK(manifest.at("corpus").at("invalid_dropped") == 1);
    CHECK(manifest.at("split").at("n_train") == 4);
    CHECK(manifest.at("split").at("n_holdout") == 1);
    CHECK(manifest.at("param_count") == 543);
    CHECK(manifest.at("vocab").at("built_here") == true);
    CHECK(manifest.at("config").at("train").at("seed") == 42);
    CHECK_FALSE(fs::exists(d / "run/FAILED"));

    // eval on the exact training split reproduces the stored evaluation
    const auto ck = Checkpoint::load(d / "run/checkpoint.json");
    REQUIRE(ck.train_eval.has_value());
    REQUIRE(ck.holdout_eval.has_value());
    const auto ev = cli({"eval", "--checkpoint", d / "run/checkpoint.json", "--data",
                         d / "run/train.smi", "--vocab", d / "vocab.json", "--out",
                         d / "eval.json"});
    REQUIRE_MESSAGE(ev.code == 0, ev.err);
    const auto report = nlohmann::json::parse(ev.out);
    CHECK(std::abs(report.at("mean_fidelity").get<double>() -
                   ck.train_eval->metrics.mean_fidelity) < 1e-9);
    CHECK(report.at("n_samples") == 4);
    for (const char *key : {"mean_fidelity", "mean_ancilla_dev", "mean_loss"}) {
        CHECK(report.at(key).get<double>() >= 0.0);
        CHECK(report.at(key).get<double>() <= 1.01);
    }
    CHECK(nlohmann::json::parse(read_file(d / "eval.json")) == report);

    const auto en = cli({"encode", "--checkpoint", d / "run/checkpoint.json", "--vocab",
                         d / "vocab.json", "CC(=O)Cl"});
    REQUIRE_MESSAGE(en.code == 0, en.err);
    const auto dump = nlohmann::json::parse(en.out);
    CHECK(dump.at("mid_amplitudes").size() == 256);
    CHECK(dump.at("latent_amplitudes").size() == 16);
    double nrm = 0.0;
    for (const auto &a : dump.at("latent_amplitudes")) {
        nrm += a[0].get<double>() * a[0].get<double>() + a[1].get<double>() * a[1].get<double>();
    }
    CHECK(std::abs(nrm - 1.0) < 1e-12);
    CHECK(std::abs(dump.at("ancilla_zero_mass").get<double>() +
                   dump.at("ancilla_deviation").get<double>() - 1.0) < 1e-12);

    CHECK(cli({"encode", "--checkpoint", d / "run/checkpoint.json", "--vocab",
               d / "vocab.json", "CC?"}).code == 2);

    // a different vocabulary is refused
    write_file(d / "other.smi", "NN\n");
    REQUIRE(cli({"build-vocab", "--data", d / "other.smi", "--out", d / "other.json"}).code == 0);
    CHECK(cli({"eval", "--checkpoint", d / "run/checkpoint.json", "--data",
               d / "run/train.smi", "--vocab", d / "other.json"}).code == 2);
}

TEST_CASE("train reruns are bitwise identical apart from wall time") {
    TempDir d("rerun");
    write_file(d / "corpus.csv", kTinyCorpus);
    write_file(d / "run.conf", tiny_config(d, 2));
    REQUIRE(cli({"train", "--config", d / "run.conf", "--out", d / "a"}).code == 0);
    REQUIRE(cli({"train", "--config", d / "run.conf", "--out", d / "b"}).code == 0);
    const auto a = csv_rows(read_file(d / "a/metrics.csv"));
    const auto b = csv_rows(read_file(d / "b/metrics.csv"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 1; i < a.size(); ++i) {
        CHECK(a[i].substr(0, a[i].rfind(',')) == b[i].substr(0, b[i].rfind(',')));
    }
    CHECK(read_file(d / "a/train.smi") == read_file(d / "b/train.smi"));
    CHECK(Checkpoint::load(d / "a/checkpoint.json").params ==
          Checkpoint::load(d / "b/checkpoint.json").params);
}

TEST_CASE("train guards") {
    TempDir d("guards");
    write_file(d / "corpus.csv", kTinyCorpus);
    write_file(d / "run.conf", tiny_config(d, 1));
    CHECK(cli({"train", "--config", d / "run.conf", "--data", d / "nope.csv"}).code == 2);
    write_file(d / "nodata.conf", "arch.latent = 4\narch.layers = 5\nout.dir = x\n");
    CHECK(cli({"train", "--config", d / "nodata.conf"}).code == 2);
    CHECK(cli({"train", "--config", d / "absent.conf"}).code == 2);
    write_file(d / "bad.conf", tiny_config(d, 1) + "train.momentum = 0.9\n");
    CHECK(cli({"train", "--config", d / "bad.conf"}).code == 2);
    CHECK(cli({"train", "--config", d / "run.conf", "--grad-engine", "spsa"}).code == 2);
    write_file(d / "empty.csv", "smiles\n");
    CHECK(cli({"train", "--config", d / "run.conf", "--data", d / "empty.csv"}).code == 2);
}

TEST_CASE("zero-parameter checkpoint is the identity") {
    TempDir d("zero");
    write_file(d / "corpus.smi", "CCO\nCC(=O)Cl\nc1ccccc1\n");
    REQUIRE(cli({"build-vocab", "--data", d / "corpus.smi", "--out", d / "v.json"}).code == 0);
    const auto vocab = TokenVocab::from_json(read_file(d / "v.json"));
    Checkpoint ck;
    ck.arch = ArchConfig{8, 4, 5};
    ck.params.assign(param_count(ck.arch), 0.0);
    ck.vocab_hash = vocab.hash();
    ck.save(d / "zero.json");

    const auto stats = cmd_eval(d / "zero.json", d / "corpus.smi", d / "v.json");
    CHECK(std::abs(stats.metrics.mean_fidelity - 1.0) < 1e-12);
    CHECK(stats.metrics.n_samples == 3);

    const auto dump = cmd_encode(d / "zero.json", d / "v.json", "C");
    const auto prepared = encode_smiles("C", vocab);
    // zero angles leave the prepared state untouched up to a global phase
    cplx overlap{0.0, 0.0};
    for (std::size_t k = 0; k < 256; ++k) {
        const auto &a = dump.at("mid_amplitudes")[k];
        overlap += std::conj(prepared[k]) * cplx{a[0].get<double>(), a[1].get<double>()};
    }
    CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);

    // molecules with unknown tokens are skipped and counted
    write_file(d / "mixed.smi", "CCO\nBrCBr\n");
    const auto mixed = cmd_eval(d / "zero.json", d / "mixed.smi", d / "v.json");
    CHECK(mixed.metrics.n_samples == 1);
    CHECK(mixed.n_skipped == 1);
}
