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
#include "molqae/data.hpp"

#include "molqae/error.hpp"
#include "molqae/rng.hpp"
#include "molqae/smiles.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

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

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string_view cell = trim(line.substr(start, comma - start));
        if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
            cell = cell.substr(1, cell.size() - 2);
        }
        cells.push_back(cell);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

std::vector<std::string> Corpus::smiles() const {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const Record &r : records) {
        out.push_back(r.smiles);
    }
    return out;
}

std::string CleanReport::to_json() const {
    nlohmann::json doc;
    doc["kept"] = kept;
    doc["dup_dropped"] = dup_dropped;
    doc["invalid_dropped"] = invalid_dropped;
    doc["source_hash"] = source_hash;
    return doc.dump(2) + "\n";
}

Corpus parse_corpus(std::string_view text, std::string source) {
    Corpus corpus;
    corpus.source = std::move(source);
    corpus.content_hash = hex64(fnv1a64(text));

    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }

    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) {
        ++first;
    }
    if (first == lines.size()) {
        return corpus;
    }

    const std::string_view header = trim(lines[first]);
    const bool csv = header.find(',') != std::string_view::npos ||
                     lower(header) == "smiles";
    std::size_t column = 0;
    if (csv) {
        const auto cells = split_csv(header);
        const auto it = std::find_if(cells.begin(), cells.end(), [](auto c) {
            return lower(c) == "smiles";
        });
        if (it == cells.end()) {
            throw InputError(corpus.source + ":" + std::to_string(first + 1) +
                             ": CSV header has no 'smiles' column");
        }
        column = static_cast<std::size_t>(it - cells.begin());
        ++first;
    }

    for (std::size_t i = first; i < lines.size(); ++i) {
        const std::string_view line = trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        std::string_view value = line;
        if (csv) {
            const auto cells = split_csv(line);
            if (column >= cells.size()) {
                throw InputError(corpus.source + ":" + std::to_string(i + 1) +
                                 ": row has no smiles field");
            }
            value = cells[column];
        }
        corpus.records.push_back({corpus.records.size(), std::string(value)});
    }
    return corpus;
}

Corpus load_corpus(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open corpus file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str(), path.string());
}

std::pair<Corpus, CleanReport> clean(const Corpus &corpus) {
    Corpus out;
    out.source = corpus.source;
    out.content_hash = corpus.content_hash;
    CleanReport report;
    report.source_hash = corpus.content_hash;
    std::unordered_set<std::string> seen;
    for (const Record &r : corpus.records) {
        if (seen.contains(r.smiles)) {
            ++report.dup_dropped;
            continue;
        }
        seen.insert(r.smiles);
        try {
            (void)tokenize(r.smiles);
        } catch (const TokenizeError &) {
            ++report.invalid_dropped;
            continue;
        }
        out.records.push_back(r);
    }
    report.kept = out.records.size();
    return {std::move(out), std::move(report)};
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    SplitMix64 rng(seed);
    for (std::size_t i = n; i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

std::pair<Corpus, Corpus> split(const Corpus &corpus, std::uint64_t seed,
                                double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train fraction must be in (0, 1)");
    }
    const auto order = shuffled_indices(corpus.size(), seed);
    const auto n_train = static_cast<std::size_t>(
        std::llround(static_cast<double>(corpus.size()) * train_fraction));
    Corpus train{{}, corpus.source, corpus.content_hash};
    Corpus holdout{{}, corpus.source, corpus.content_hash};
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < n_train ? train : holdout).records.push_back(corpus.records[order[i]]);
    }
    return {std::move(train), std::move(holdout)};
}

std::vector<std::vector<std::size_t>> batch_indices(std::size_t n,
                                                    std::size_t batch_size,
                                                    std::uint64_t seed,
                                                    unsigned epoch) {
    if (batch_size < 1) {
        throw ConfigError("batch size must be at least 1");
    }
    const auto order = shuffled_indices(n, derive_seed(seed, epoch));
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t end = std::min(n, start + batch_size);
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

std::vector<std::vector<Record>> batches(const Corpus &corpus,
                                         std::size_t batch_size,
                                         std::uint64_t seed, unsigned epoch) {
    std::vector<std::vector<Record>> out;
    for (const auto &idx : batch_indices(corpus.size(), batch_size, seed, epoch)) {
        auto &batch = out.emplace_back();
        batch.reserve(idx.size());
        for (const std::size_t i : idx) {
            batch.push_back(corpus.records[i]);
        }
    }
    return out;
}

} // namespace molqae
