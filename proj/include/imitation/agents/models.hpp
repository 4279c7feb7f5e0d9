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

#include <cstddef>
#include <span>
#include <vector>

#include "imitation/agents/message.hpp"
#include "imitation/nn/layers.hpp"
#include "imitation/nn/rng.hpp"
#include "imitation/nn/tape.hpp"

namespace imitation {

using nn::Tape;
using nn::Var;

// ---------------------------------------------------------------------------
// Parameter bundles

/// Symbol embedding (dimension h) feeding a GRU of width h.
struct EncoderParams {
  nn::LinearParams embedding;
  nn::GruParams gru;

  static EncoderParams init(const Alphabet& alphabet, std::size_t hidden, Rng& rng) {
    const double bound = nn::init_bound(hidden);
    EncoderParams p;
    p.embedding = nn::LinearParams::init(hidden, alphabet.total(), bound, rng);
    p.gru = nn::GruParams::init(hidden, hidden, rng);
    return p;
  }

  std::size_t hidden() const { return gru.hidden_size; }

  void collect(nn::ParamList& out) {
    embedding.collect(out);
    gru.collect(out);
  }
};

/// Attentive GRU decoder. Its input at each step is the embedding of the
/// previous symbol concatenated with the attention context; the first step
/// is fed the EOS embedding. The head maps the new state to logits over the
/// full alphabet (EOS included).
struct DecoderParams {
  nn::LinearParams embedding;
  nn::GruParams gru;
  nn::AttentionParams attention;
  nn::LinearParams head;

  static DecoderParams init(const Alphabet& alphabet, std::size_t hidden, std::size_t enc_hidden,
                            Rng& rng) {
    const double bound = nn::init_bound(hidden);
    DecoderParams p;
    p.embedding = nn::LinearParams::init(hidden, alphabet.total(), bound, rng);
    p.gru = nn::GruParams::init(hidden + enc_hidden, hidden, rng);
    p.attention = nn::AttentionParams::init(hidden, hidden, enc_hidden, rng);
    p.head = nn::LinearParams::init(alphabet.total(), hidden, bound, rng);
    return p;
  }

  void collect(nn::ParamList& out) {
    embedding.collect(out);
    gru.collect(out);
    attention.collect(out);
    head.collect(out);
  }
};

// ---------------------------------------------------------------------------
// Sequence generation

/// Decoder state machine over one encoded trigger. next_distribution()
/// returns pi for the next position; feed() commits the symbol placed there.
class DecoderRun {
 public:
  DecoderRun(Tape& tape, const Alphabet& alphabet, EncoderParams& encoder, DecoderParams& decoder,
             std::span<const Symbol> trigger)
      : tape_(tape), decoder_(decoder), previous_(alphabet.eos()) {
    if (trigger.empty()) throw InputError("decoder trigger must not be empty");
    auto states = nn::encode(tape, encoder.gru, encoder.embedding, trigger);
    state_ = states.back();
    memory_ = nn::attention_memory(tape, decoder.attention, std::move(states));
  }

  Var next_distribution() {
    Var context = nn::attend(tape_, decoder_.attention, state_, memory_).context;
    Var input = tape_.concat(nn::embed(tape_, decoder_.embedding, previous_), context);
    state_ = nn::gru_step(tape_, decoder_.gru, input, state_);
    return tape_.softmax(nn::linear(tape_, decoder_.head, state_));
  }

  void feed(Symbol s) { previous_ = s; }

 private:
  Tape& tape_;
  DecoderParams& decoder_;
  nn::AttentionMemory memory_;
  Var state_;
  Symbol previous_;
};

/// A generated message plus the distribution vars used at each position.
struct DecodeTrace {
  Message message;
  std::vector<Var> distributions;
};

/// Samples a reply to `trigger` until EOS is drawn or `max_len` ordinary
/// symbols have been emitted, at which point EOS is appended without
/// sampling. The forced position still records the model's own pi.
inline DecodeTrace generate(Tape& tape, const Alphabet& alphabet, EncoderParams& encoder,
                            DecoderParams& decoder, std::span<const Symbol> trigger,
                            std::size_t max_len, Rng& rng) {
  DecoderRun run(tape, alphabet, encoder, decoder, trigger);
  std::vector<Symbol> symbols;
  DecodeTrace trace;
  for (;;) {
    Var pi = run.next_distribution();
    trace.distributions.push_back(pi);
    const Symbol s = symbols.size() == max_len
                         ? alphabet.eos()
                         : static_cast<Symbol>(sample_categorical(tape.value(pi), rng));
    symbols.push_back(s);
    if (s == alphabet.eos()) break;
    run.feed(s);
  }
  trace.message = Message::from(symbols, alphabet);
  return trace;
}

/// Distributions along a fixed reply (teacher forcing); one per symbol.
inline std::vector<Var> decode_forced(Tape& tape, const Alphabet& alphabet, EncoderParams& encoder,
                                      DecoderParams& decoder, std::span<const Symbol> trigger,
                                      std::span<const Symbol> reply) {
  DecoderRun run(tape, alphabet, encoder, decoder, trigger);
  std::vector<Var> out;
  for (Symbol s : reply) {
    out.push_back(run.next_distribution());
    run.feed(s);
  }
  return out;
}

struct StepDistribution {
  std::size_t position = 0;
  std::vector<double> probs;
  Symbol symbol = 0;
};

struct Response {
  Message message;
  std::vector<StepDistribution> steps;
};

inline Response to_response(const Tape& tape, const DecodeTrace& trace) {
  Response r{trace.message, {}};
  for (std::size_t k = 0; k < trace.distributions.size(); ++k) {
    auto p = tape.value(trace.distributions[k]);
    r.steps.push_back({k, {p.begin(), p.end()}, trace.message.symbols()[k]});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Actor

struct ActorModel {
  Alphabet alphabet;
  EncoderParams encoder;
  DecoderParams decoder;

  static ActorModel init(const Alphabet& alphabet, std::size_t hidden, Rng& rng) {
    if (hidden == 0) throw ConfigError("actor hidden size must be positive");
    ActorModel a{alphabet, {}, {}};
    a.encoder = EncoderParams::init(alphabet, hidden, rng);
    a.decoder = DecoderParams::init(alphabet, hidden, hidden, rng);
    return a;
  }

  std::size_t hidden() const { return encoder.hidden(); }

  nn::ParamList parameters() {
    nn::ParamList out;
    encoder.collect(out);
    decoder.collect(out);
    return out;
  }
};

inline Response actor_respond(ActorModel& actor, const Message& question, std::size_t max_len,
                              Rng& rng) {
  Tape tape;
  auto trace = generate(tape, actor.alphabet, actor.encoder, actor.decoder, question.symbols(),
                        max_len, rng);
  return to_response(tape, trace);
}

// ---------------------------------------------------------------------------
// Critic

/// GRU encoder with a linear head giving one logistic q-value per possible
/// next symbol. Each entry is an independent probability, not a share of a
/// distribution over symbols.
struct CriticModel {
  Alphabet alphabet;
  nn::LinearParams embedding;
  nn::GruParams gru;
  nn::LinearParams head;

  static CriticModel init(const Alphabet& alphabet, std::size_t hidden, Rng& rng) {
    if (hidden == 0) throw ConfigError("critic hidden size must be positive");
    const double bound = nn::init_bound(hidden);
    CriticModel c{alphabet, {}, {}, {}};
    c.embedding = nn::LinearParams::init(hidden, alphabet.total(), bound, rng);
    c.gru = nn::GruParams::init(hidden, hidden, rng);
    c.head = nn::LinearParams::init(alphabet.total(), hidden, bound, rng);
    return c;
  }

  std::size_t hidden() const { return gru.hidden_size; }

  nn::ParamList parameters() {
    nn::ParamList out;
    embedding.collect(out);
    gru.collect(out);
    head.collect(out);
    return out;
  }
};

/// q-vector for the prefix summarized by `state`.
inline Var critic_q(Tape& tape, CriticModel& critic, Var state) {
  return tape.sigmoid(nn::linear(tape, critic.head, state));
}

/// Encoder states for the empty prefix and every prefix of `symbols` up to
/// but excluding the whole sequence: entry k summarizes symbols [0, k).
inline std::vector<Var> critic_prefix_states(Tape& tape, CriticModel& critic,
                                             std::span<const Symbol> symbols) {
  std::vector<Var> states;
  states.reserve(symbols.size());
  Var h = tape.zeros(critic.hidden());
  states.push_back(h);
  for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
    if (!critic.alphabet.contains(symbols[k])) throw InputError("critic: symbol outside the alphabet");
    h = nn::gru_step(tape, critic.gru, nn::embed(tape, critic.embedding, symbols[k]), h);
    states.push_back(h);
  }
  return states;
}

inline std::vector<double> critic_q(CriticModel& critic, std::span<const Symbol> prefix) {
  Tape tape;
  Var h = tape.zeros(critic.hidden());
  for (Symbol s : prefix) {
    if (!critic.alphabet.contains(s)) throw InputError("critic: symbol outside the alphabet");
    h = nn::gru_step(tape, critic.gru, nn::embed(tape, critic.embedding, s), h);
  }
  auto q = tape.value(critic_q(tape, critic, h));
  return {q.begin(), q.end()};
}

/// Incremental critic evaluation on a private tape: push symbols one at a
/// time and read the q-vector for the prefix so far. Never differentiated.
class CriticCursor {
 public:
  explicit CriticCursor(CriticModel& critic) : critic_(critic), state_(tape_.zeros(critic.hidden())) {}

  void push(Symbol s) {
    if (!critic_.alphabet.contains(s)) throw InputError("critic: symbol outside the alphabet");
    state_ = nn::gru_step(tape_, critic_.gru, nn::embed(tape_, critic_.embedding, s), state_);
  }

  void push(std::span<const Symbol> symbols) {
    for (Symbol s : symbols) push(s);
  }

  std::vector<double> q() {
    auto v = tape_.value(critic_q(tape_, critic_, state_));
    return {v.begin(), v.end()};
  }

 private:
  CriticModel& critic_;
  Tape tape_;
  Var state_;
};

// ---------------------------------------------------------------------------
// Interrogator

/// One encoder shared by two branches: the question decoder and a logistic
/// discriminator on the encoder's final state. The encoder (with the
/// discriminator head) is updated by discriminator training; the question
/// decoder is updated by actor training.
struct InterrogatorModel {
  Alphabet alphabet;
  EncoderParams encoder;
  DecoderParams question;
  nn::LinearParams discriminator;  // 1 x h
  CriticModel critic;

  static InterrogatorModel init(const Alphabet& alphabet, std::size_t hidden, Rng& rng) {
    if (hidden == 0) throw ConfigError("interrogator hidden size must be positive");
    InterrogatorModel m{alphabet, {}, {}, {}, CriticModel::init(alphabet, hidden, rng)};
    m.encoder = EncoderParams::init(alphabet, hidden, rng);
    m.question = DecoderParams::init(alphabet, hidden, hidden, rng);
    m.discriminator = nn::LinearParams::init(1, hidden, nn::init_bound(hidden), rng);
    return m;
  }

  std::size_t hidden() const { return encoder.hidden(); }

  nn::ParamList question_parameters() {
    nn::ParamList out;
    question.collect(out);
    return out;
  }

  nn::ParamList discriminator_parameters() {
    nn::ParamList out;
    encoder.collect(out);
    discriminator.collect(out);
    return out;
  }

  nn::ParamList critic_parameters() { return critic.parameters(); }
};

/// Question elicited by the fixed EOS-only trigger.
inline DecodeTrace interrogator_question(Tape& tape, InterrogatorModel& m, std::size_t max_len,
                                         Rng& rng) {
  const Symbol trigger[] = {m.alphabet.eos()};
  return generate(tape, m.alphabet, m.encoder, m.question, trigger, max_len, rng);
}

inline Response interrogator_question(InterrogatorModel& m, std::size_t max_len, Rng& rng) {
  Tape tape;
  return to_response(tape, interrogator_question(tape, m, max_len, rng));
}

/// Probability that the answer in `full` (question || answer) came from blue.
inline Var discriminate(Tape& tape, InterrogatorModel& m, std::span<const Symbol> full) {
  validate_exchange(full, m.alphabet);
  auto states = nn::encode(tape, m.encoder.gru, m.encoder.embedding, full);
  return tape.sigmoid(nn::linear(tape, m.discriminator, states.back()));
}

inline double discriminate(InterrogatorModel& m, std::span<const Symbol> full) {
  Tape tape;
  return tape.scalar_value(discriminate(tape, m, full));
}

/// Ties at exactly 0.5 go to blue.
inline AgentType classify(double p_blue) { return p_blue >= 0.5 ? AgentType::blue : AgentType::red; }

}  // namespace imitation
