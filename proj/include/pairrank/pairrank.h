// Copyright 2026 The PairRank Authors. All Rights Reserved.
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
//
// Convenience header pulling in the whole library.

#ifndef PAIRRANK_PAIRRANK_H_
#define PAIRRANK_PAIRRANK_H_

#include "pairrank/core.h"
#include "pairrank/experiments.h"
#include "pairrank/io.h"
#include "pairrank/link.h"
#include "pairrank/metrics.h"
#include "pairrank/model.h"
#include "pairrank/objective.h"
#include "pairrank/optim.h"
#include "pairrank/oracle.h"
#include "pairrank/synth.h"
#include "pairrank/verify.h"

#endif  // PAIRRANK_PAIRRANK_H_
