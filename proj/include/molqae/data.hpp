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
 * Corpus ingestion, cleaning, splitting and per-epoch batching.
 *
 * Inputs are assumed to be canonical SMILES already; deduplication is by
 * exact string. All shuffles are Fisher-Yates driven by SplitMix64
 * (i from n-1 down to 1, j = next_below(i + 1)), seeded with `seed` for
 * splits and derive_seed(seed, epoch) for batch order.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace molqae {

struct Record {
    std::size_t id = 0; ///< position in the source file, 0-based
    std::string smiles;
    friend bool operator==(const Record &, const Record &) = default;
};

struct Corpus {
    std::vector<Record> records;
    std::string source;       ///< path or label
    std::string content_hash; ///< FNV-1a of the raw file bytes, hex

    [[nodiscard]] std::size_t size() const noexcept { return records.size(); }
    [[nodiscard]] std::vector<std::string> smiles() const;
};

struct CleanReport {
    std::size_t kept = 0;
    std::size_t dup_dropped = 0;
    std::size_t invalid_dropped = 0;
    std::string source_hash;

    [[nodiscard]] std::string to_json() const;
};

/// One SMILES per line, or CSV whose header has a `smiles` column. A first
/// line containing a comma, or equal to "smiles", is taken as a header.
[[nodiscard]] Corpus parse_corpus(std::string_view text, std::string source);
/// Throws InputError when the file cannot be read.
[[nodiscard]] Corpus load_corpus(const std::filesystem::path &path);

/// Drops exact duplicates (first kept) and strings the tokenizer rejects.
[[nodiscard]] std::pair<Corpus, CleanReport> clean(const Corpus &corpus);

/// Seeded shuffle then prefix split; train gets llround(n * fraction).
[[nodiscard]] std::pair<Corpus, Corpus> split(const Corpus &corpus,
                                              std::uint64_t seed,
                                              double train_fraction);

[[nodiscard]] std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                        std::uint64_t seed);

/// Index batches covering 0..n-1 once, in the order for `epoch`.
[[nodiscard]] std::vector<std::vector<std::size_t>>
batch_indices(std::size_t n, std::size_t batch_size, std::uint64_t seed,
              unsigned epoch);

[[nodiscard]] std::vector<std::vector<Record>>
batches(const Corpus &corpus, std::size_t batch_size, std::uint64_t seed,
        unsigned epoch);

} // namespace molqae
