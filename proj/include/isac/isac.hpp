// Copyright 2026 The isac-region Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "isac/types.hpp"
#include "isac/config.hpp"
#include "isac/rng.hpp"
#include "isac/stats.hpp"
#include "isac/transforms.hpp"
#include "isac/channels.hpp"
#include "isac/waveforms.hpp"
#include "isac/unitary_average.hpp"
#include "isac/commrate.hpp"
#include "isac/sensing.hpp"
#include "isac/region.hpp"
#include "isac/io.hpp"
#include "isac/cli.hpp"
