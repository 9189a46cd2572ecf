// Copyright 2026 The trps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "trps/errors.hpp"
#include "trps/matrix.hpp"
#include "trps/prediction.hpp"
#include "trps/rank_structure.hpp"
#include "trps/scoring.hpp"
#include "trps/weights.hpp"
#include "trps/sim/bradley_terry.hpp"
#include "trps/sim/experiment.hpp"
#include "trps/sim/predictions.hpp"
#include "trps/sim/rng.hpp"
#include "trps/sim/tournament.hpp"
#include "trps/ensemble/ensemble.hpp"
