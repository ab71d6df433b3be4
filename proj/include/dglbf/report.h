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
//
// Placement result writers. The JSON form is also readable back.

#ifndef DGLBF_REPORT_H_
#define DGLBF_REPORT_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dglbf/solver.h"

namespace dglbf {

enum class OutputFormat { kTable, kJson, kCsv };

absl::StatusOr<OutputFormat> ParseOutputFormat(absl::string_view text);

// Columns: Flow | Replicas | Path | Path Rel. [%] | MinB [ms] | MaxB [ms] |
// Per-hop additional delay [ms] | Route Rel. [%], then a status line.
std::string FormatTable(const PlacementResult& result);

// {"status", "allocations": [{flow, replica, path_id, path, path_rel, min_b,
// max_b, per_hop_delay}], "route_rel": {flow: r}, "link_loads": [{src, dst,
// load}], "stats": {...}, "blocking_flow"}.
std::string PlacementToJson(const PlacementResult& result);
absl::StatusOr<PlacementResult> PlacementFromJson(absl::string_view text);

// One row per allocation:
// flow,replica,path_id,path,path_rel,route_rel,min_b,max_b,per_hop_delay
// with the path's nodes separated by spaces.
std::string PlacementToCsv(const PlacementResult& result);

absl::StatusOr<PlacementStatus> ParsePlacementStatus(absl::string_view text);

}  // namespace dglbf

#endif  // DGLBF_REPORT_H_
