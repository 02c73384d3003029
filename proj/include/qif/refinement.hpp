// Copyright 2026 The qifdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QIF_REFINEMENT_HPP_
#define QIF_REFINEMENT_HPP_

#include <optional>

#include "qif/channel.hpp"

namespace qif {

// Searches for a row-stochastic post-processing R with cascade(c, R) == d,
// exactly. Returns the first basic feasible solution found, or nullopt when
// none exists; callers must only rely on the witness property
// cascade(c, *witness) == d, never on a particular matrix.
//
// Solved as one exact rational linear-feasibility problem: a forced-zero
// presolve (R[y][z] = 0 whenever some secret x has c[x][y] > 0 but
// d[x][z] = 0) followed by phase-1 simplex with Bland's rule.
std::optional<Channel> refinement_witness(const Channel& c, const Channel& d);

}  // namespace qif

#endif  // QIF_REFINEMENT_HPP_
