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
#include "molqae/smiles.hpp"

#include "molqae/error.hpp"
#include "molqae/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <set>

namespace molqae {
namespace {

constexpr std::string_view kSingleChar = "BCNOPSFIbcnops-=#/\\()0123456789.";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

std::vector<std::string> tokenize(std::string_view smiles) {
    if (smiles.empty()) {
        throw TokenizeError("empty SMILES string", 0);
    }
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < smiles.size()) {
        const char c = smiles[pos];
        if (c == '[') {
            const std::size_t close = smiles.find(']', pos + 1);
            if (close == std::string_view::npos) {
                throw TokenizeError("unterminated bracket atom at position " +
                                        std::to_string(pos),
                                    pos);
            }
            const std::string_view body = smiles.substr(pos + 1, close - pos - 1);
            if (body.empty() || body.find('[') != std::string_view::npos) {
                throw TokenizeError("malformed bracket atom at position " +
                                        std::to_string(pos),
                                    pos);
            }
            out.emplace_back(smiles.substr(pos, close - pos + 1));
            pos = close + 1;
            continue;
        }
        const std::string_view rest = smiles.substr(pos);
        if (rest.starts_with("Cl") || rest.starts_with("Br")) {
            out.emplace_back(rest.substr(0, 2));
            pos += 2;
            continue;
        }
        if (c == '%') {
            if (rest.size() < 3 || !is_digit(rest[1]) || !is_digit(rest[2])) {
                throw TokenizeError("ring closure '%' needs two digits at "
                                    "position " +
                                        std::to_string(pos),
                                    pos);
            }
            out.emplace_back(rest.substr(0, 3));
            pos += 3;
            continue;
        }
        if (kSingleChar.find(c) != std::string_view::npos) {
            out.emplace_back(1, c);
            ++pos;
            continue;
        }
        throw TokenizeError(std::string("unexpected character '") + c +
                                "' at position " + std::to_string(pos),
                            pos);
    }
    return out;
}

TokenVocab::TokenVocab(std::vector<std::string> tokens) {
    std::set<std::string> uniq(std::make_move_iterator(tokens.begin()),
                               std::make_move_iterator(tokens.end()));
    uniq.erase(std::string(kPadToken));
    tokens_.reserve(uniq.size() + 1);
    tokens_.emplace_back(kPadToken);
    tokens_.insert(tokens_.end(), uniq.begin(), uniq.end());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        index_.emplace(tokens_[i], i);
    }
}

std::size_t TokenVocab::index_of(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) {
        throw VocabError("token '" + std::string(token) +
                         "' is not in the vocabulary");
    }
    return it->second;
}

bool TokenVocab::contains(std::string_view token) const {
    return index_.contains(std::string(token));
}

std::string TokenVocab::to_json() const {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["pad"] = std::string(kPadToken);
    doc["tokens"] = tokens_;
    return doc.dump(2) + "\n";
}

TokenVocab TokenVocab::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("vocabulary is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("version", 0) != 1 ||
        !doc.contains("tokens") || !doc["tokens"].is_array()) {
        throw InputError("vocabulary JSON must carry version 1 and a tokens array");
    }
    if (doc.value("pad", std::string()) != kPadToken) {
        throw InputError("vocabulary pad token must be " + std::string(kPadToken));
    }
    auto tokens = doc["tokens"].get<std::vector<std::string>>();
    if (tokens.empty() || tokens.front() != kPadToken) {
        throw InputError("vocabulary must list the pad token first");
    }
    TokenVocab vocab(tokens);
    if (vocab.tokens() != tokens) {
        throw InputError("vocabulary tokens are not in canonical sorted order");
    }
    return vocab;
}

std::string TokenVocab::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(to_json())));
    return buf;
}

TokenVocab build_vocab(std::span<const std::string> corpus) {
    if (corpus.empty()) {
        throw ConfigError("cannot build a vocabulary from an empty corpus");
    }
    std::vector<std::string> all;
    for (const std::string &smiles : corpus) {
        auto toks = tokenize(smiles);
        all.insert(all.end(), std::make_move_iterator(toks.begin()),
                   std::make_move_iterator(toks.end()));
    }
    return TokenVocab(std::move(all));
}

FeatureVector featurize(std::span<const std::string> tokens,
                        const TokenVocab &vocab) {
    FeatureVector xi{};
    const auto v = static_cast<double>(vocab.size());
    const std::size_t n = std::min(tokens.size(), kFeatureLength);
    for (std::size_t j = 0; j < n; ++j) {
        xi[j] = static_cast<double>(vocab.index_of(tokens[j])) / v;
    }
    // tokens past the 22nd are dropped, but must still be known
    for (std::size_t j = n; j < tokens.size(); ++j) {
        (void)vocab.index_of(tokens[j]);
    }
    return xi;
}

PrepAngles prep_params(const FeatureVector &xi) {
    PrepAngles angles{};
    for (std::size_t i = 0; i < kMolQubits; ++i) {
        angles[i].theta = std::numbers::pi * xi[(3 * i) % kFeatureLength];
        angles[i].phi = std::numbers::pi * xi[(3 * i + 1) % kFeatureLength];
        angles[i].lambda = std::numbers::pi * xi[(3 * i + 2) % kFeatureLength];
    }
    return angles;
}

StateVector prepare_state(const PrepAngles &angles) {
    StateVector state(kMolQubits);
    for (unsigned q = 0; q < kMolQubits; ++q) {
        apply_u3(state, q, angles[q].theta, angles[q].phi, angles[q].lambda);
    }
    for (unsigned q = 0; q < kMolQubits; ++q) {
        apply_cnot(state, q, (q + 1) % kMolQubits);
    }
    return state;
}

StateVector encode_smiles(std::string_view smiles, const TokenVocab &vocab) {
    const auto tokens = tokenize(smiles);
    return prepare_state(prep_params(featurize(tokens, vocab)));
}

} // namespace molqae
