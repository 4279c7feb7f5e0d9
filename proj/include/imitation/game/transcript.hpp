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

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "imitation/game/engine.hpp"

namespace imitation {

// Transcript format: one JSON object per line, one line per round.
//
//   {"iteration": 12, "round": 3,
//    "question": [4],                     symbol indices, EOS included
//    "slots": ["red", "blue"],            true source of answers[0], answers[1]
//    "answers": [[0, 2, 4], [1, 4]],
//    "inferred": ["blue", "blue"],        interrogator's label per slot
//    "p_blue": [0.71, 0.55],              discriminator output per slot
//    "rewards": {"interrogator": 0, "blue": 1, "red": 1}}

inline AgentType agent_type_from_string(const std::string& s) {
  if (s == "blue") return AgentType::blue;
  if (s == "red") return AgentType::red;
  throw InputError("unknown agent type '" + s + "'");
}

inline nlohmann::json to_json(const InteractionRecord& r) {
  auto syms = [](const Message& m) { return std::vector<Symbol>(m.symbols().begin(), m.symbols().end()); };
  nlohmann::json j;
  j["iteration"] = r.iteration;
  j["round"] = r.round;
  j["question"] = syms(r.question);
  j["slots"] = {to_string(r.slots[0]), to_string(r.slots[1])};
  j["answers"] = {syms(r.answers[0]), syms(r.answers[1])};
  j["inferred"] = {to_string(r.inferred[0]), to_string(r.inferred[1])};
  j["p_blue"] = {r.p_blue[0], r.p_blue[1]};
  j["rewards"] = {{"interrogator", r.rewards.interrogator}, {"blue", r.rewards.blue}, {"red", r.rewards.red}};
  return j;
}

inline InteractionRecord record_from_json(const nlohmann::json& j, const Alphabet& alphabet) {
  auto msg = [&](const nlohmann::json& a) { return Message::from(a.get<std::vector<Symbol>>(), alphabet); };
  InteractionRecord r;
  r.iteration = j.at("iteration").get<std::uint64_t>();
  r.round = j.at("round").get<std::uint64_t>();
  r.question = msg(j.at("question"));
  for (std::size_t i = 0; i < 2; ++i) {
    r.slots[i] = agent_type_from_string(j.at("slots").at(i).get<std::string>());
    r.answers[i] = msg(j.at("answers").at(i));
    r.inferred[i] = agent_type_from_string(j.at("inferred").at(i).get<std::string>());
    r.p_blue[i] = j.at("p_blue").at(i).get<double>();
  }
  const auto& rw = j.at("rewards");
  r.rewards = {rw.at("interrogator").get<int>(), rw.at("blue").get<int>(), rw.at("red").get<int>()};
  return r;
}

inline void write_transcript_line(std::ostream& out, const InteractionRecord& r) {
  out << to_json(r).dump() << '\n';
}

}  // namespace imitation
