// Copyright 2026 The Dimlight Authors
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

#ifndef DIMLIGHT_PARALLEL_H_
#define DIMLIGHT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace dimlight {

// Calls body(i) for every i in [0, count) on up to `jobs` threads (the
// calling thread included). Items are claimed in index order. body must not
// throw; callers capture per-item errors themselves so results can be merged
// in a schedule-independent order.
void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& body);

}  // namespace dimlight

#endif  // DIMLIGHT_PARALLEL_H_
