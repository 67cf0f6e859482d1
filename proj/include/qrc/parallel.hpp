// Copyright 2026 The QRC Memory Authors
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

#include <cstddef>
#include <cstdint>
#include <functional>

namespace qrc {

/// Stream seed for work item `index`: splitmix64 finalizer applied to
/// seed ^ (index * 0x9E3779B97F4A7C15 + 0x632BE59BD9B4E019).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// Runs body(i) for i in [0, n) on up to `workers` threads pulling indices
/// from a shared counter. If any call throws, no new items are started and
/// the exception from the lowest failing index is rethrown after all
/// threads join.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace qrc
