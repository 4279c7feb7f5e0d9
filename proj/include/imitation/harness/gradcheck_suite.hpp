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

#include <cstdint>
#include <string>
#include <vector>

#include "imitation/agents/models.hpp"
#include "imitation/nn/gradcheck.hpp"
#include "imitation/nn/layers.hpp"
#include "imitation/training/losses.hpp"

namespace imitation {

struct GradCheckCase {
  std::string name;
  std::uint64_t seed = 0;
  nn::GradCheckReport report;
};

namespace detail {

/// Fixed random projection turning a vector output into a scalar.
inline Var project(Tape& tape, Var y, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(tape.value(y).size());
  for (double& x : w) x = uniform(rng, -1.0, 1.0);
  return tape.dot(y, tape.constant(w));
}

inline nn::ParamTensor random_tensor(std::size_t n, Rng& rng, double bound = 1.0) {
  nn::ParamTensor t(n);
  t.fill_uniform(rng, bound);
  return t;
}

inline std::vector<Symbol> random_message(const Alphabet& a, std::size_t max_content, Rng& rng) {
  std::vector<Symbol> out;
  const std::size_t len = static_cast<std::size_t>(rng() % (max_content + 1));
  for (std::size_t i = 0; i < len; ++i) out.push_back(static_cast<Symbol>(rng() % a.size));
  out.push_back(a.eos());
  return out;
}

// Moves biases off zero so their gradients are exercised in general position.
inline void jitter(const nn::ParamList& params, Rng& rng) {
  for (auto* p : params) {
    for (double& v : p->values()) v += uniform(rng, -0.3, 0.3);
  }
}

}  // namespace detail

/// Finite-difference checks over every differentiable piece of the model
/// stack, each repeated for `seeds` random instances.
inline std::vector<GradCheckCase> run_gradcheck_suite(int seeds = 10, double eps = 1e-5) {
  std::vector<GradCheckCase> out;
  const Alphabet alphabet(4);
  for (int s = 0; s < seeds; ++s) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(s);
    Rng rng(seed);

    {  // linear layer
      auto lin = nn::LinearParams::init(5, 7, 0.5, rng);
      auto x = detail::random_tensor(7, rng);
      nn::ParamList ps;
      lin.collect(ps);
      detail::jitter(ps, rng);
      ps.push_back(&x);
      out.push_back({"linear", seed, nn::grad_check(ps, [&](Tape& t) {
                       return detail::project(t, nn::linear(t, lin, t.leaf(x)), seed);
                     }, eps)});
    }
    {  // gru_step, inputs included
      auto gru = nn::GruParams::init(4, 3, rng);
      auto x = detail::random_tensor(4, rng);
      auto h = detail::random_tensor(3, rng, 0.9);
      nn::ParamList ps;
      gru.collect(ps);
      detail::jitter(ps, rng);
      ps.push_back(&x);
      ps.push_back(&h);
      out.push_back({"gru_step", seed, nn::grad_check(ps, [&](Tape& t) {
                       return detail::project(t, nn::gru_step(t, gru, t.leaf(x), t.leaf(h)), seed);
                     }, eps)});
    }
    {  // encoder over a message
      auto emb = nn::LinearParams::init(6, alphabet.total(), 0.4, rng);
      auto gru = nn::GruParams::init(6, 6, rng);
      const auto msg = detail::random_message(alphabet, 6, rng);
      nn::ParamList ps;
      emb.collect(ps);
      gru.collect(ps);
      detail::jitter(ps, rng);
      out.push_back({"encode", seed, nn::grad_check(ps, [&](Tape& t) {
                       auto states = nn::encode(t, gru, emb, msg);
                       return detail::project(t, states.back(), seed);
                     }, eps)});
    }
    {  // attention + softmax chain
      auto att = nn::AttentionParams::init(5, 4, 6, rng);
      auto dec = detail::random_tensor(4, rng);
      std::vector<nn::ParamTensor> enc;
      for (int i = 0; i < 4; ++i) enc.push_back(detail::random_tensor(6, rng));
      auto head = nn::LinearParams::init(3, 6, 0.5, rng);
      nn::ParamList ps;
      att.collect(ps);
      head.collect(ps);
      detail::jitter(ps, rng);
      ps.push_back(&dec);
      for (auto& e : enc) ps.push_back(&e);
      out.push_back({"attend_softmax", seed, nn::grad_check(ps, [&](Tape& t) {
                       std::vector<Var> es;
                       for (auto& e : enc) es.push_back(t.leaf(e));
                       Var ctx = nn::attend(t, att, t.leaf(dec), es).context;
                       return detail::project(t, t.softmax(nn::linear(t, head, ctx)), seed);
                     }, eps)});
    }
    {  // sigmoid + bce
      auto logit = detail::random_tensor(1, rng, 2.0);
      const double target = static_cast<double>(rng() % 2);
      nn::ParamList ps{&logit};
      out.push_back({"bce", seed, nn::grad_check(ps, [&](Tape& t) {
                       return t.bce(t.sigmoid(t.leaf(logit)), target);
                     }, eps)});
    }
    {  // critic loss along a question/answer sequence
      auto critic = CriticModel::init(alphabet, 8, rng);
      auto ps = critic.parameters();
      detail::jitter(ps, rng);
      auto seq = detail::random_message(alphabet, 4, rng);
      const auto ans = detail::random_message(alphabet, 5, rng);
      seq.insert(seq.end(), ans.begin(), ans.end());
      const double target = static_cast<double>(rng() % 2);
      out.push_back({"critic_loss", seed, nn::grad_check(ps, [&](Tape& t) {
                       return critic_sequence_loss(t, critic, seq, target);
                     }, eps)});
    }
    {  // discriminator loss
      auto m = InterrogatorModel::init(alphabet, 8, rng);
      auto ps = m.discriminator_parameters();
      detail::jitter(ps, rng);
      auto seq = detail::random_message(alphabet, 4, rng);
      const auto ans = detail::random_message(alphabet, 5, rng);
      seq.insert(seq.end(), ans.begin(), ans.end());
      const double target = static_cast<double>(rng() % 2);
      out.push_back({"discriminator_loss", seed, nn::grad_check(ps, [&](Tape& t) {
                       return discriminator_loss(t, m, seq, target);
                     }, eps)});
    }
    {  // full actor pipeline: encode -> attend -> decode -> softmax -> bce
      auto actor = ActorModel::init(alphabet, 8, rng);
      auto ps = actor.parameters();
      detail::jitter(ps, rng);
      const auto question = detail::random_message(alphabet, 4, rng);
      const auto reply = detail::random_message(alphabet, 5, rng);
      out.push_back({"actor_pipeline", seed, nn::grad_check(ps, [&](Tape& t) {
                       auto pis = decode_forced(t, alphabet, actor.encoder, actor.decoder, question, reply);
                       std::vector<Var> terms;
                       for (std::size_t k = 0; k < pis.size(); ++k) {
                         terms.push_back(t.bce(t.pick(pis[k], reply[k]), 1.0));
                       }
                       return t.sum(terms);
                     }, eps)});
    }
    {  // actor score with the sampling stream pinned
      auto actor = ActorModel::init(alphabet, 8, rng);
      auto critic = CriticModel::init(alphabet, 8, rng);
      auto ps = actor.parameters();
      detail::jitter(ps, rng);
      const auto q = Message::from(detail::random_message(alphabet, 4, rng), alphabet);
      const std::uint64_t sample_seed = rng();
      out.push_back({"actor_score", seed, nn::grad_check(ps, [&](Tape& t) {
                       Rng pinned(sample_seed);
                       return actor_score(t, actor, critic, q, 6, pinned).score;
                     }, eps)});
    }
  }
  return out;
}

}  // namespace imitation
