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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "imitation/nn/errors.hpp"
#include "imitation/nn/param.hpp"
#include "imitation/nn/rng.hpp"
#include "imitation/nn/tape.hpp"

namespace imitation::nn {

using Symbol = std::uint32_t;

/// Weights are drawn uniformly from [-1/sqrt(h), 1/sqrt(h)]; biases start at zero.
inline double init_bound(std::size_t hidden) { return 1.0 / std::sqrt(static_cast<double>(hidden)); }

// ---------------------------------------------------------------------------
// Linear layer

struct LinearParams {
  ParamTensor weight;  // out x in
  ParamTensor bias;    // out

  LinearParams() = default;
  LinearParams(std::size_t out, std::size_t in) : weight(out, in), bias(out) {}

  static LinearParams init(std::size_t out, std::size_t in, double bound, Rng& rng) {
    LinearParams p(out, in);
    p.weight.fill_uniform(rng, bound);
    return p;
  }

  std::size_t out_dim() const { return weight.rows(); }
  std::size_t in_dim() const { return weight.cols(); }

  void collect(ParamList& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }
};

inline Var linear(Tape& tape, LinearParams& p, Var x) { return tape.linear(p.weight, &p.bias, x); }

/// Linear map of a one-hot symbol: column `symbol` of the weight plus bias.
inline Var embed(Tape& tape, LinearParams& p, Symbol symbol) {
  return tape.embed(p.weight, p.bias, symbol);
}

// ---------------------------------------------------------------------------
// GRU

/// Cho et al. gated recurrent unit:
///   z  = sigmoid(W_z x + U_z h + b_z)
///   r  = sigmoid(W_r x + U_r h + b_r)
///   c  = tanh(W_c x + U_c (r * h) + b_c)
///   h' = (1 - z) * h + z * c
struct GruParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  ParamTensor w_z, u_z, b_z;
  ParamTensor w_r, u_r, b_r;
  ParamTensor w_c, u_c, b_c;

  GruParams() = default;
  GruParams(std::size_t input, std::size_t hidden)
      : input_size(input),
        hidden_size(hidden),
        w_z(hidden, input), u_z(hidden, hidden), b_z(hidden),
        w_r(hidden, input), u_r(hidden, hidden), b_r(hidden),
        w_c(hidden, input), u_c(hidden, hidden), b_c(hidden) {}

  static GruParams init(std::size_t input, std::size_t hidden, Rng& rng) {
    GruParams p(input, hidden);
    const double bound = init_bound(hidden);
    for (ParamTensor* m : {&p.w_z, &p.u_z, &p.w_r, &p.u_r, &p.w_c, &p.u_c}) {
      m->fill_uniform(rng, bound);
    }
    return p;
  }

  void collect(ParamList& out) {
    for (ParamTensor* t : {&w_z, &u_z, &b_z, &w_r, &u_r, &b_r, &w_c, &u_c, &b_c}) {
      out.push_back(t);
    }
  }
};

inline Var gru_step(Tape& tape, GruParams& p, Var x, Var h_prev) {
  if (tape.dim(x) != p.input_size || tape.dim(h_prev) != p.hidden_size) {
    throw ConfigError("gru_step: input or state dimension does not match the cell");
  }
  Var z = tape.sigmoid(tape.linear2(p.w_z, x, p.u_z, h_prev, p.b_z));
  Var r = tape.sigmoid(tape.linear2(p.w_r, x, p.u_r, h_prev, p.b_r));
  Var c = tape.tanh(tape.linear2(p.w_c, x, p.u_c, tape.mul(r, h_prev), p.b_c));
  return tape.lerp(z, h_prev, c);
}

/// Value-level convenience wrapper around gru_step.
inline std::vector<double> gru_step(GruParams& p, std::span<const double> x,
                                    std::span<const double> h_prev) {
  Tape tape;
  Var h = gru_step(tape, p, tape.constant(x), tape.constant(h_prev));
  auto v = tape.value(h);
  return {v.begin(), v.end()};
}

/// Runs the GRU over the embedded symbols from a zero initial state and
/// returns one hidden state per symbol. State i depends only on symbols
/// [0, i], so encoding a prefix reproduces the leading states exactly.
inline std::vector<Var> encode(Tape& tape, GruParams& p, LinearParams& embedding,
                               std::span<const Symbol> symbols, Var initial) {
  std::vector<Var> states;
  states.reserve(symbols.size());
  Var h = initial;
  for (Symbol s : symbols) {
    if (s >= embedding.in_dim()) throw InputError("encode: symbol outside the alphabet");
    h = gru_step(tape, p, embed(tape, embedding, s), h);
    states.push_back(h);
  }
  return states;
}

inline std::vector<Var> encode(Tape& tape, GruParams& p, LinearParams& embedding,
                               std::span<const Symbol> symbols) {
  return encode(tape, p, embedding, symbols, tape.zeros(p.hidden_size));
}

// ---------------------------------------------------------------------------
// Additive attention

/// score(s, e) = v . tanh(W_s s + W_e e), softmaxed over encoder positions.
struct AttentionParams {
  ParamTensor w_dec;  // a x h_dec
  ParamTensor w_enc;  // a x h_enc
  ParamTensor score;  // a

  AttentionParams() = default;
  AttentionParams(std::size_t attn, std::size_t dec, std::size_t enc)
      : w_dec(attn, dec), w_enc(attn, enc), score(attn) {}

  static AttentionParams init(std::size_t attn, std::size_t dec, std::size_t enc, Rng& rng) {
    AttentionParams p(attn, dec, enc);
    const double bound = init_bound(attn);
    p.w_dec.fill_uniform(rng, bound);
    p.w_enc.fill_uniform(rng, bound);
    p.score.fill_uniform(rng, bound);
    return p;
  }

  void collect(ParamList& out) {
    out.push_back(&w_dec);
    out.push_back(&w_enc);
    out.push_back(&score);
  }
};

/// Encoder states with their projections W_e e precomputed; the projections
/// are reused at every decoder step.
struct AttentionMemory {
  std::vector<Var> states;
  std::vector<Var> keys;
};

inline AttentionMemory attention_memory(Tape& tape, AttentionParams& p, std::vector<Var> states) {
  if (states.empty()) throw std::logic_error("attend: no encoder states");
  AttentionMemory mem;
  mem.keys.reserve(states.size());
  for (Var e : states) mem.keys.push_back(tape.linear(p.w_enc, nullptr, e));
  mem.states = std::move(states);
  return mem;
}

struct Attended {
  Var context;
  Var weights;
};

inline Attended attend(Tape& tape, AttentionParams& p, Var dec_state, const AttentionMemory& mem) {
  Var query = tape.linear(p.w_dec, nullptr, dec_state);
  std::vector<Var> scores;
  scores.reserve(mem.keys.size());
  for (Var key : mem.keys) {
    scores.push_back(tape.dot_param(p.score, tape.tanh(tape.add(query, key))));
  }
  Var alpha = tape.softmax(tape.stack(scores));
  return {tape.weighted_sum(alpha, mem.states), alpha};
}

inline Attended attend(Tape& tape, AttentionParams& p, Var dec_state, std::span<const Var> enc_states) {
  return attend(tape, p, dec_state,
                attention_memory(tape, p, std::vector<Var>(enc_states.begin(), enc_states.end())));
}

// ---------------------------------------------------------------------------
// Probability heads

inline std::vector<double> softmax(std::span<const double> logits) {
  require_finite(logits, "softmax input");
  Tape tape;
  auto v = tape.value(tape.softmax(tape.constant(logits)));
  return {v.begin(), v.end()};
}

inline double bce(double x, double y) {
  Tape tape;
  return tape.scalar_value(tape.bce(tape.scalar(x), y));
}

}  // namespace imitation::nn
