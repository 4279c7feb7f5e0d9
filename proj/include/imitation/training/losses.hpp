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

#include <span>
#include <stdexcept>
#include <vector>

#include "imitation/agents/models.hpp"
#include "imitation/nn/rng.hpp"
#include "imitation/nn/tape.hpp"

namespace imitation {

/// eta(x) = 1 iff the interrogator's label equals x.
inline double eta(AgentType x, AgentType inferred) { return x == inferred ? 1.0 : 0.0; }

/// Sum over positions k of BCE(Q(m[0..k), m[k]), target): the q-value of each
/// realized symbol given the prefix before it, EOS positions included.
inline Var critic_sequence_loss(Tape& tape, CriticModel& critic, std::span<const Symbol> m,
                                double target) {
  if (m.empty()) throw InputError("critic loss: empty sequence");
  auto states = critic_prefix_states(tape, critic, m);
  std::vector<Var> terms;
  terms.reserve(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    Var q = critic_q(tape, critic, states[k]);
    terms.push_back(tape.bce(tape.pick(q, m[k]), target));
  }
  return tape.sum(terms);
}

/// Agent critics estimate the chance that a continuation ends up labeled
/// blue, whoever actually sent it.
inline Var agent_critic_loss(Tape& tape, CriticModel& critic, std::span<const Symbol> m,
                             AgentType inferred) {
  return critic_sequence_loss(tape, critic, m, eta(AgentType::blue, inferred));
}

/// The interrogator's critic estimates the chance that the label it will
/// assign is correct.
inline Var interrogator_critic_loss(Tape& tape, CriticModel& critic, std::span<const Symbol> m,
                                    AgentType truth, AgentType inferred) {
  return critic_sequence_loss(tape, critic, m, eta(truth, inferred));
}

enum class DiscriminatorTarget {
  /// 1 iff the true source is blue.
  true_type,
  /// 1 iff the label assigned during play was correct, taken as written in
  /// the loss table. Kept for fidelity experiments.
  literal,
};

inline double discriminator_target(DiscriminatorTarget mode, AgentType truth, AgentType inferred) {
  return mode == DiscriminatorTarget::true_type ? eta(AgentType::blue, truth) : eta(truth, inferred);
}

inline Var discriminator_loss(Tape& tape, InterrogatorModel& m, std::span<const Symbol> full,
                              double target) {
  return tape.bce(discriminate(tape, m, full), target);
}

inline Var discriminator_loss(Tape& tape, InterrogatorModel& m, std::span<const Symbol> full,
                              AgentType truth) {
  return discriminator_loss(tape, m, full, eta(AgentType::blue, truth));
}

struct ScoredResponse {
  Var score;
  Message message;
};

/// Expected critic value of a freshly sampled reply: the sum over generated
/// positions of pi_k . Q(prefix_k), where prefix_k is `critic_prefix`
/// followed by the symbols generated before position k. Q is read as a
/// constant, so the score is differentiable in the actor through pi only.
inline ScoredResponse actor_score(Tape& tape, const Alphabet& alphabet, EncoderParams& encoder,
                                  DecoderParams& decoder, CriticModel& critic,
                                  std::span<const Symbol> trigger,
                                  std::span<const Symbol> critic_prefix, std::size_t max_len,
                                  Rng& rng) {
  DecodeTrace trace = generate(tape, alphabet, encoder, decoder, trigger, max_len, rng);
  CriticCursor cursor(critic);
  cursor.push(critic_prefix);
  std::vector<Var> terms;
  terms.reserve(trace.distributions.size());
  for (std::size_t k = 0; k < trace.distributions.size(); ++k) {
    const auto q = cursor.q();
    terms.push_back(tape.dot(trace.distributions[k], tape.constant(q)));
    cursor.push(trace.message.symbols()[k]);
  }
  return {tape.sum(terms), std::move(trace.message)};
}

/// Agent form: the question is both the trigger and the critic's prefix.
inline ScoredResponse actor_score(Tape& tape, ActorModel& actor, CriticModel& critic,
                                  const Message& question, std::size_t max_len, Rng& rng) {
  return actor_score(tape, actor.alphabet, actor.encoder, actor.decoder, critic,
                     question.symbols(), question.symbols(), max_len, rng);
}

/// Interrogator form: the EOS-only trigger elicits a question, which the
/// critic reads from the start of the question/answer sequence.
inline ScoredResponse actor_score(Tape& tape, InterrogatorModel& m, std::size_t max_len, Rng& rng) {
  const Symbol trigger[] = {m.alphabet.eos()};
  return actor_score(tape, m.alphabet, m.encoder, m.question, m.critic, trigger, {}, max_len, rng);
}

}  // namespace imitation
