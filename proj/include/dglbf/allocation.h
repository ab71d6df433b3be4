// Copyright 2026 The dglbf Authors
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
// -----------------------------------------------------------------------------

#ifndef DGLBF_ALLOCATION_H_
#define DGLBF_ALLOCATION_H_

#include <string>
#include <vector>

namespace dglbf {

// One chosen path for one replica of one flow.
struct ReplicaAllocation {
  std::string flow;
  int replica = 1;  // 1-based
  std::string path_id;
  std::vector<std::string> path;
  // Residual minimum budget after the path's own latency, ms. May be negative;
  // the arrival window absorbs up to 2*Th of lateness.
  double min_b = 0;
  // min_b + 2*Th - estimated queuing time, ms. Set once the whole assignment
  // is known.
  double max_b = 0;
  double per_hop_delay = 0;  // ms
  double path_reliability = 1;

  int hop_count() const { return static_cast<int>(path.size()) - 1; }

  bool operator==(const ReplicaAllocation&) const = default;
};

}  // namespace dglbf

#endif  // DGLBF_ALLOCATION_H_
