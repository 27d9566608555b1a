// Copyright 2026 The ico-netsim Authors
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

// Umbrella header for the simulation library (no CLI, no OpenSSL).

#pragma once

#include "ico/efficiency.hpp"
#include "ico/entanglement.hpp"
#include "ico/graphstate.hpp"
#include "ico/optical.hpp"
#include "ico/protocol.hpp"
#include "ico/protocol_tables.hpp"
#include "ico/qcore.hpp"
