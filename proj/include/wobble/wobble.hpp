/*
 * Copyright 2026 The uav-wobble Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file wobble.hpp
 * @brief Convenience header pulling in the whole library.
 */

#pragma once

#include "wobble/specfun.hpp"
#include "wobble/random.hpp"
#include "wobble/montecarlo.hpp"
#include "wobble/wobble_process.hpp"
#include "wobble/displacement_stats.hpp"
#include "wobble/temporal_acf.hpp"
#include "wobble/doppler_psd.hpp"
#include "wobble/link_bep.hpp"
#include "wobble/scenario.hpp"
#include "wobble/harness.hpp"
