//
// Copyright 2026 The Privacy HCR Authors
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
//

#ifndef PRIVACY_HCR_CLI_COMMANDS_H_
#define PRIVACY_HCR_CLI_COMMANDS_H_

#include <ostream>

#include "privacy_hcr/cli/config.h"
#include "privacy_hcr/hcr_bound.h"
#include "privacy_hcr/monte_carlo.h"

namespace privacy_hcr::cli {

// Exit codes of the privacy-hcr executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDomainError = 3;

// Each command prints a "key: value unit" report to `report` and, when
// out_path is set, writes its CSV table there. Errors propagate as
// ConfigError / DomainError.
BoundReport CmdBound(const CommandOptions& options, std::ostream& report);
EstimationResult CmdEstimate(const CommandOptions& options,
                             std::ostream& report);
MeasurementSeries CmdSimulate(const CommandOptions& options,
                              std::ostream& report);
TrialSummary CmdMonteCarlo(const CommandOptions& options,
                           std::ostream& report);
void CmdSweep(const CommandOptions& options, std::ostream& report);

// Parses argv, dispatches to a command and maps errors to exit codes.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace privacy_hcr::cli

#endif  // PRIVACY_HCR_CLI_COMMANDS_H_
