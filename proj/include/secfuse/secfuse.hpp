/*
 * Copyright 2026 The secfuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "secfuse/builtin.hpp"
#include "secfuse/config_json.hpp"
#include "secfuse/error.hpp"
#include "secfuse/fusion.hpp"
#include "secfuse/isolation.hpp"
#include "secfuse/pipeline.hpp"
#include "secfuse/rng.hpp"
#include "secfuse/scenario.hpp"
#include "secfuse/simulator.hpp"
#include "secfuse/trace_io.hpp"
#include "secfuse/types.hpp"
