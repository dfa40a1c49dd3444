// Copyright 2026 The scatterblur Authors
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

#ifndef SCATTERBLUR_SUMMATION_HPP
#define SCATTERBLUR_SUMMATION_HPP

#include <span>

namespace scatterblur {

/// Pairwise (tree) summation. The split points depend only on the length,
/// so the result is a deterministic function of the input order.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace scatterblur

#endif  // SCATTERBLUR_SUMMATION_HPP
