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
#include "molqae/io.hpp"

#include "molqae/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace molqae {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" +
                          std::string(value) + "'");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    try {
        return parse_double(value);
    } catch (const InputError &) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" +
                          std::string(value) + "'");
    }
}

nlohmann::json metrics_json(const BatchMetrics &m) {
    return {{"mean_loss", m.mean_loss},
            {"mean_fidelity", m.mean_fidelity},
            {"mean_ancilla_dev", m.mean_ancilla_dev},
            {"n_samples", m.n_samples}};
}

EvalStats eval_from_json(const nlohmann::json &doc) {
    EvalStats s;
    s.metrics.mean_loss = doc.at("mean_loss").get<double>();
    s.metrics.mean_fidelity = doc.at("mean_fidelity").get<double>();
    s.metrics.mean_ancilla_dev = doc.at("mean_ancilla_dev").get<double>();
    s.metrics.n_samples = doc.at("n_samples").get<std::size_t>();
    s.n_skipped = doc.value("n_skipped", std::size_t{0});
    return s;
}

} // namespace

void RunConfig::require_complete() const {
    if (data_path.empty()) {
        throw ConfigError("missing data path (data.path or --data)");
    }
    if (vocab_path.empty()) {
        throw ConfigError("missing vocabulary path (data.vocab or --vocab)");
    }
    if (out_dir.empty()) {
        throw ConfigError("missing output directory (out.dir or --out)");
    }
    if (!has_latent || !has_layers) {
        throw ConfigError("arch.latent and arch.layers are required");
    }
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw ConfigError("data.train_fraction must be in (0, 1]");
    }
    arch.validate();
    train.validate();
}

nlohmann::json RunConfig::to_json() const {
    return {{"data",
             {{"path", data_path.string()},
              {"vocab", vocab_path.string()},
              {"train_fraction", train_fraction}}},
            {"arch",
             {{"qubits", arch.n_qubits},
              {"latent", arch.n_latent},
              {"layers", arch.n_layers}}},
            {"train", train_config_json(train)},
            {"out", {{"dir", out_dir.string()}}}};
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    TrainConfig &t = cfg.train;
    using Setter = std::function<void(std::string_view, std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters{
        {"data.path", [&](auto, auto v) { cfg.data_path = std::string(v); }},
        {"data.vocab", [&](auto, auto v) { cfg.vocab_path = std::string(v); }},
        {"data.train_fraction",
         [&](auto k, auto v) { cfg.train_fraction = parse_real(k, v); }},
        {"arch.latent",
         [&](auto k, auto v) {
             cfg.arch.n_latent = parse_integer<unsigned>(k, v);
             cfg.has_latent = true;
         }},
        {"arch.layers",
         [&](auto k, auto v) {
             cfg.arch.n_layers = parse_integer<unsigned>(k, v);
             cfg.has_layers = true;
         }},
        {"train.max_epochs",
         [&](auto k, auto v) { t.max_epochs = parse_integer<unsigned>(k, v); }},
        {"train.patience",
         [&](auto k, auto v) { t.patience = parse_integer<unsigned>(k, v); }},
        {"train.lr", [&](auto k, auto v) { t.base_lr = parse_real(k, v); }},
        {"train.lambda", [&](auto k, auto v) { t.lambda_weight = parse_real(k, v); }},
        {"train.batch_size",
         [&](auto k, auto v) { t.batch_size = parse_integer<std::size_t>(k, v); }},
        {"train.clip_max_norm",
         [&](auto k, auto v) { t.clip_max_norm = parse_real(k, v); }},
        {"train.seed",
         [&](auto k, auto v) { t.seed = parse_integer<std::uint64_t>(k, v); }},
        {"train.adam_beta1", [&](auto k, auto v) { t.adam_beta1 = parse_real(k, v); }},
        {"train.adam_beta2", [&](auto k, auto v) { t.adam_beta2 = parse_real(k, v); }},
        {"train.adam_eps", [&](auto k, auto v) { t.adam_eps = parse_real(k, v); }},
        {"train.grad_engine",
         [&](auto, auto v) { t.engine = parse_gradient_engine(v); }},
        {"out.dir", [&](auto, auto v) { cfg.out_dir = std::string(v); }},
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t, std::less<>> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + std::string(key) + "'");
        }
        if (const auto dup = seen.find(key); dup != seen.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": '" +
                              std::string(key) + "' already set on line " +
                              std::to_string(dup->second));
        }
        seen.emplace(std::string(key), line_no);
        if (value.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty value for '" + std::string(key) + "'");
        }
        it->second(key, value);
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError("config file '" + path.string() + "' does not exist");
    }
    return parse_run_config(read_file(path));
}

std::string format_double(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) {
        throw InternalError("cannot format double");
    }
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw InputError("not a decimal number: '" + std::string(s) + "'");
    }
    return out;
}

std::string format_metrics_row(const EpochRecord &rec) {
    return std::to_string(rec.epoch) + "," + format_double(rec.avg_loss) + "," +
           format_double(rec.avg_fidelity) + "," +
           format_double(rec.avg_ancilla_dev) + "," + format_double(rec.lr) + "," +
           format_double(rec.wall_time_s);
}

nlohmann::json EvalStats::to_json() const {
    auto doc = metrics_json(metrics);
    doc["n_skipped"] = n_skipped;
    return doc;
}

nlohmann::json train_config_json(const TrainConfig &cfg) {
    return {{"max_epochs", cfg.max_epochs},
            {"patience", cfg.patience},
            {"lr", cfg.base_lr},
            {"lambda", cfg.lambda_weight},
            {"batch_size", cfg.batch_size},
            {"clip_max_norm", cfg.clip_max_norm},
            {"seed", cfg.seed},
            {"adam_beta1", cfg.adam_beta1},
            {"adam_beta2", cfg.adam_beta2},
            {"adam_eps", cfg.adam_eps},
            {"grad_engine", std::string(to_string(cfg.engine))}};
}

nlohmann::json Checkpoint::to_json() const {
    nlohmann::json doc;
    doc["format_version"] = kFormatVersion;
    doc["arch"] = {{"n_qubits", arch.n_qubits},
                   {"n_latent", arch.n_latent},
                   {"n_layers", arch.n_layers}};
    auto values = nlohmann::json::array();
    for (const double p : params) {
        values.push_back(format_double(p));
    }
    doc["params"] = std::move(values);
    doc["vocab_hash"] = vocab_hash;
    doc["train_config"] = train_config_json(train);
    doc["best_epoch"] = best_epoch;
    if (best_record) {
        doc["best_record"] = {{"epoch", best_record->epoch},
                              {"avg_loss", best_record->avg_loss},
                              {"avg_fidelity", best_record->avg_fidelity},
                              {"avg_ancilla_dev", best_record->avg_ancilla_dev},
                              {"lr", best_record->lr}};
    }
    if (train_eval) {
        doc["train_eval"] = train_eval->to_json();
    }
    if (holdout_eval) {
        doc["holdout_eval"] = holdout_eval->to_json();
    }
    return doc;
}

Checkpoint Checkpoint::from_json(const nlohmann::json &doc) {
    Checkpoint ck;
    try {
        if (doc.at("format_version").get<int>() != kFormatVersion) {
            throw InputError("unsupported checkpoint format version");
        }
        const auto &a = doc.at("arch");
        ck.arch.n_qubits = a.at("n_qubits").get<unsigned>();
        ck.arch.n_latent = a.at("n_latent").get<unsigned>();
        ck.arch.n_layers = a.at("n_layers").get<unsigned>();
        for (const auto &p : doc.at("params")) {
            ck.params.push_back(parse_double(p.get<std::string>()));
        }
        ck.vocab_hash = doc.at("vocab_hash").get<std::string>();
        const auto &t = doc.at("train_config");
        ck.train.max_epochs = t.at("max_epochs").get<unsigned>();
        ck.train.patience = t.at("patience").get<unsigned>();
        ck.train.base_lr = t.at("lr").get<double>();
        ck.train.lambda_weight = t.at("lambda").get<double>();
        ck.train.batch_size = t.at("batch_size").get<std::size_t>();
        ck.train.clip_max_norm = t.at("clip_max_norm").get<double>();
        ck.train.seed = t.at("seed").get<std::uint64_t>();
        ck.train.adam_beta1 = t.at("adam_beta1").get<double>();
        ck.train.adam_beta2 = t.at("adam_beta2").get<double>();
        ck.train.adam_eps = t.at("adam_eps").get<double>();
        ck.train.engine = parse_gradient_engine(t.at("grad_engine").get<std::string>());
        ck.best_epoch = doc.value("best_epoch", 0U);
        if (doc.contains("best_record")) {
            const auto &b = doc["best_record"];
            EpochRecord r;
            r.epoch = b.at("epoch").get<unsigned>();
            r.avg_loss = b.at("avg_loss").get<double>();
            r.avg_fidelity = b.at("avg_fidelity").get<double>();
            r.avg_ancilla_dev = b.at("avg_ancilla_dev").get<double>();
            r.lr = b.at("lr").get<double>();
            ck.best_record = r;
        }
        if (doc.contains("train_eval")) {
            ck.train_eval = eval_from_json(doc["train_eval"]);
        }
        if (doc.contains("holdout_eval")) {
            ck.holdout_eval = eval_from_json(doc["holdout_eval"]);
        }
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("malformed checkpoint: ") + e.what());
    }
    ck.arch.validate();
    if (ck.params.size() != param_count(ck.arch)) {
        throw InputError("checkpoint has " + std::to_string(ck.params.size()) +
                         " parameters, architecture needs " +
                         std::to_string(param_count(ck.arch)));
    }
    return ck;
}

void Checkpoint::save(const std::filesystem::path &path) const {
    write_file(path, to_json().dump(2) + "\n");
}

Checkpoint Checkpoint::load(const std::filesystem::path &path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception &e) {
        throw InputError("checkpoint '" + path.string() + "' is not JSON: " + e.what());
    }
    return from_json(doc);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    out << contents;
}

} // namespace molqae
