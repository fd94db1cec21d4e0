// Copyright 2026 The dynscene Authors
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

#ifndef DYNSCENE_PARALLEL_H_
#define DYNSCENE_PARALLEL_H_

#include <functional>

namespace dynscene {

// Number of worker threads used by ParallelFor; defaults to the hardware
// concurrency and can be overridden with DYNSCENE_THREADS.
int WorkerCount();

// Calls fn(i) for every i in [0, n). Work items are handed out dynamically;
// callers must only write to disjoint outputs. The first exception thrown by
// any item is rethrown after all workers finish.
void ParallelFor(int n, const std::function<void(int)>& fn);

}  // namespace dynscene

#endif  // DYNSCENE_PARALLEL_H_
