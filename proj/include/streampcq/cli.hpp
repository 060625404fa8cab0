// Copyright 2026 The streamPCQ Authors. All Rights Reserved.
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

// Command-line front end. Exit codes:
//   0 success, 1 usage, 2 input error, 3 parse error, 4 config error,
//   5 numeric failure.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "streampcq/error.hpp"

namespace streampcq::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitParse = 3,
  kExitConfig = 4,
  kExitNumeric = 5,
};

ExitCode exit_code_for(ErrorCategory category);

const char* tool_version();

// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streampcq::cli
