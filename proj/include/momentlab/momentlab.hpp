// Copyright 2026 The momentlab developers
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

#include "momentlab/ensembles.hpp"
#include "momentlab/haarmoments.hpp"
#include "momentlab/hardpair.hpp"
#include "momentlab/linalg.hpp"
#include "momentlab/observable.hpp"
#include "momentlab/partition.hpp"
#include "momentlab/rational.hpp"
#include "momentlab/report.hpp"
#include "momentlab/rng.hpp"
#include "momentlab/symfun.hpp"
#include "momentlab/tensorperm.hpp"
#include "momentlab/testersim.hpp"
