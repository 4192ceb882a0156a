// Copyright 2026 The speedcov Authors
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

#include "speedcov/bruteforce.hpp"
#include "speedcov/checker.hpp"
#include "speedcov/closure.hpp"
#include "speedcov/coverage.hpp"
#include "speedcov/error.hpp"
#include "speedcov/experiment.hpp"
#include "speedcov/instance.hpp"
#include "speedcov/instance_io.hpp"
#include "speedcov/milp_model.hpp"
#include "speedcov/model.hpp"
#include "speedcov/mps.hpp"
#include "speedcov/sampling.hpp"
#include "speedcov/simplex.hpp"
#include "speedcov/solver.hpp"
