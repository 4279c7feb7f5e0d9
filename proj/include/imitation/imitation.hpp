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

#include "imitation/nn/adam.hpp"
#include "imitation/nn/gradcheck.hpp"
#include "imitation/nn/layers.hpp"
#include "imitation/nn/tape.hpp"
#include "imitation/agents/message.hpp"
#include "imitation/agents/models.hpp"
#include "imitation/game/engine.hpp"
#include "imitation/game/transcript.hpp"
#include "imitation/training/losses.hpp"
#include "imitation/training/trainer.hpp"
#include "imitation/harness/config.hpp"
#include "imitation/harness/experiments.hpp"
#include "imitation/harness/gradcheck_suite.hpp"
#include "imitation/harness/metrics.hpp"
#include "imitation/harness/run.hpp"
