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
 * SMILES tokenization, vocabulary, feature vectors and molecular state
 * preparation.
 */
#pragma once

#include "molqae/qsim.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace molqae {

inline constexpr std::size_t kFeatureLength = 22;
inline constexpr unsigned kMolQubits = 8;
inline constexpr std::string_view kPadToken = "<PAD>";

/**
 * Greedy longest-match SMILES tokenizer.
 *
 * Token classes, tried in order at each position: bracket atoms "[...]"
 * kept verbatim, the two-letter organic atoms Cl and Br, two-digit ring
 * closures "%NN", then single characters (organic-subset atoms BCNOPSFI,
 * aromatic bcnops, bonds -=#/\, branches (), ring digits, '.').
 * Throws TokenizeError with the offending offset otherwise; '@' is only
 * legal inside brackets.
 */
[[nodiscard]] std::vector<std::string> tokenize(std::string_view smiles);

/// Pad token at index 0, observed tokens sorted bytewise at 1..V-1.
class TokenVocab {
  public:
    /// `tokens` excludes the pad; they are deduplicated and sorted.
    explicit TokenVocab(std::vector<std::string> tokens);

    [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }
    /// All tokens including the pad at position 0.
    [[nodiscard]] const std::vector<std::string> &tokens() const noexcept {
        return tokens_;
    }
    /// Throws VocabError when absent.
    [[nodiscard]] std::size_t index_of(std::string_view token) const;
    [[nodiscard]] bool contains(std::string_view token) const;

    /// Canonical JSON: {"pad":"<PAD>","tokens":[...],"version":1}.
    [[nodiscard]] std::string to_json() const;
    static TokenVocab from_json(std::string_view text);
    /// FNV-1a of to_json(), as 16 lowercase hex digits.
    [[nodiscard]] std::string hash() const;

    friend bool operator==(const TokenVocab &a, const TokenVocab &b) {
        return a.tokens_ == b.tokens_;
    }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

[[nodiscard]] TokenVocab build_vocab(std::span<const std::string> corpus);

using FeatureVector = std::array<double, kFeatureLength>;

/// xi[j] = index(token_j) / V over the first 22 tokens, zero-padded.
[[nodiscard]] FeatureVector featurize(std::span<const std::string> tokens,
                                      const TokenVocab &vocab);

struct U3Angles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    friend bool operator==(const U3Angles &, const U3Angles &) = default;
};

using PrepAngles = std::array<U3Angles, kMolQubits>;

/// Cyclic assignment: qubit i reads xi[3i mod 22], xi[3i+1 mod 22],
/// xi[3i+2 mod 22], each scaled by pi.
[[nodiscard]] PrepAngles prep_params(const FeatureVector &xi);

/// U3 on every qubit, then CNOT(i, i+1 mod 8) for i = 0..7 ascending.
[[nodiscard]] StateVector prepare_state(const PrepAngles &angles);

/// tokenize -> featurize -> prep_params -> prepare_state.
[[nodiscard]] StateVector encode_smiles(std::string_view smiles,
                                        const TokenVocab &vocab);

} // namespace molqae
