// Copyright 2026 The annealab Authors
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

#include "annealab/enumerate.hpp"
#include "annealab/errors.hpp"
#include "annealab/exact.hpp"
#include "annealab/histogram.hpp"
#include "annealab/problem.hpp"
#include "annealab/qmc.hpp"
#include "annealab/rng.hpp"
#include "annealab/sa.hpp"
#include "annealab/spin_config.hpp"
#include "annealab/stats.hpp"
