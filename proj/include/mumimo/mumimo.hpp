// Copyright 2026 The mumimo Authors
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

#include "mumimo/channel_model.hpp"
#include "mumimo/errors.hpp"
#include "mumimo/experiment.hpp"
#include "mumimo/moments.hpp"
#include "mumimo/parallel.hpp"
#include "mumimo/pilot_training.hpp"
#include "mumimo/power_opt.hpp"
#include "mumimo/precoding.hpp"
#include "mumimo/rates.hpp"
#include "mumimo/rng.hpp"
#include "mumimo/scheduling.hpp"
