// Copyright 2026 The Imitation Game Authors.
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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imitation/nn/errors.hpp"
#include "imitation/nn/layers.hpp"

namespace imitation {

using nn::Symbol;

/// `size` ordinary symbols 0..size-1 followed by EOS at index `size`.
struct Alphabet {
  std::size_t size = 4;

  explicit Alphabet(std::size_t ordinary = 4) : size(ordinary) {
    if (ordinary == 0) throw ConfigError("alphabet needs at least one ordinary symbol");
  }

  Symbol eos() const { return static_cast<Symbol>(size); }
  std::size_t total() const { return size + 1; }
  bool contains(Symbol s) const { return s < total(); }

  bool operator==(const Alphabet&) const = default;
};

enum class AgentType { blue, red };

inline constexpr std::string_view to_string(AgentType t) { return t == AgentType::blue ? "blue" : "red"; }

inline AgentType other(AgentType t) { return t == AgentType::blue ? AgentType::red : AgentType::blue; }

/// A symbol sequence ending in its only EOS. [EOS] alone is the empty message.
class Message {
 public:
  Message() = default;

  static Message from(std::span<const Symbol> symbols, const Alphabet& alphabet) {
    if (symbols.empty() || symbols.back() != alphabet.eos()) {
      throw InputError("message must end with EOS");
    }
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (!alphabet.contains(symbols[i])) throw InputError("message symbol outside the alphabet");
      if (i + 1 < symbols.size() && symbols[i] == alphabet.eos()) {
        throw InputError("message contains an interior EOS");
      }
    }
    Message m;
    m.symbols_.assign(symbols.begin(), symbols.end());
    return m;
  }

  static Message from(std::initializer_list<Symbol> symbols, const Alphabet& alphabet) {
    return from(std::span<const Symbol>(symbols.begin(), symbols.size()), alphabet);
  }

  static Message empty(const Alphabet& alphabet) { return from({alphabet.eos()}, alphabet); }

  std::span<const Symbol> symbols() const { return symbols_; }
  /// Symbol count including the terminal EOS.
  std::size_t size() const { return symbols_.size(); }
  /// Symbol count excluding the terminal EOS.
  std::size_t content_length() const { return symbols_.empty() ? 0 : symbols_.size() - 1; }

  bool operator==(const Message&) const = default;
  auto operator<=>(const Message&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Question followed by answer, the sequence critics and the discriminator read.
inline std::vector<Symbol> concat(const Message& question, const Message& answer) {
  std::vector<Symbol> out(question.symbols().begin(), question.symbols().end());
  out.insert(out.end(), answer.symbols().begin(), answer.symbols().end());
  return out;
}

/// Checks that `full` is two well-formed messages back to back.
inline void validate_exchange(std::span<const Symbol> full, const Alphabet& alphabet) {
  if (full.empty() || full.back() != alphabet.eos()) {
    throw InputError("question/answer sequence must end with EOS");
  }
  std::size_t eos_count = 0;
  for (Symbol s : full) {
    if (!alphabet.contains(s)) throw InputError("question/answer symbol outside the alphabet");
    if (s == alphabet.eos()) ++eos_count;
  }
  if (eos_count != 2) throw InputError("question/answer sequence must contain exactly two EOS");
}

}  // namespace imitation
