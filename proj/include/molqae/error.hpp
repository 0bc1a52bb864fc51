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
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molqae {

/// Broad failure classes; the CLI maps these onto process exit codes.
enum class ErrorKind {
    Config,    ///< bad configuration or arguments supplied by the user
    Input,     ///< unreadable or malformed input files
    Index,     ///< qubit or parameter index out of range
    Argument,  ///< inconsistent arguments (dimension mismatch, equal qubits)
    Tokenize,  ///< SMILES string outside the token grammar
    Vocab,     ///< token missing from the vocabulary, or vocab mismatch
    Numerical, ///< non-finite loss, gradient or update
    Internal,  ///< broken invariant inside the library
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string &w) : Error(ErrorKind::Config, w) {}
};

class InputError : public Error {
  public:
    explicit InputError(const std::string &w) : Error(ErrorKind::Input, w) {}
};

class IndexError : public Error {
  public:
    explicit IndexError(const std::string &w) : Error(ErrorKind::Index, w) {}
};

class ArgumentError : public Error {
  public:
    explicit ArgumentError(const std::string &w)
        : Error(ErrorKind::Argument, w) {}
};

class TokenizeError : public Error {
  public:
    TokenizeError(const std::string &w, std::size_t position)
        : Error(ErrorKind::Tokenize, w), position_(position) {}
    /// Byte offset of the first character that could not be matched.
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

class VocabError : public Error {
  public:
    explicit VocabError(const std::string &w) : Error(ErrorKind::Vocab, w) {}
};

class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &w)
        : Error(ErrorKind::Numerical, w) {}
};

class InternalError : public Error {
  public:
    explicit InternalError(const std::string &w)
        : Error(ErrorKind::Internal, w) {}
};

/// 0 success, 2 configuration/input error, 3 numerical failure, 1 otherwise.
[[nodiscard]] constexpr int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Input:
    case ErrorKind::Index:
    case ErrorKind::Argument:
    case ErrorKind::Tokenize:
    case ErrorKind::Vocab:
        return 2;
    case ErrorKind::Numerical:
        return 3;
    case ErrorKind::Internal:
        break;
    }
    return 1;
}

} // namespace molqae
