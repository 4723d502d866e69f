// Copyright 2026 The ctt Authors.
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

// Core library: everything except the Eigen-based attack lab, which lives in
// ctt/support_attack.hpp.

#pragma once

#include "ctt/bch.hpp"
#include "ctt/bitstring.hpp"
#include "ctt/code_registry.hpp"
#include "ctt/entropy.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_field.hpp"
#include "ctt/gf2_poly.hpp"
#include "ctt/harness.hpp"
#include "ctt/kv_format.hpp"
#include "ctt/linear_code.hpp"
#include "ctt/mac.hpp"
#include "ctt/params.hpp"
#include "ctt/protocol.hpp"
#include "ctt/qchannel.hpp"
#include "ctt/randomizer.hpp"
#include "ctt/rng.hpp"
#include "ctt/stats.hpp"
#include "ctt/version.hpp"
