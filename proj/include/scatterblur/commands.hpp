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

#ifndef SCATTERBLUR_COMMANDS_HPP
#define SCATTERBLUR_COMMANDS_HPP

#include <exception>
#include <iosfwd>

namespace scatterblur::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kParseFailure = 1,  ///< malformed input files or command line
  kConditioning = 2,  ///< RBF system too ill-conditioned to solve accurately
  kGuard = 3,         ///< size guard refused a dense materialization
  kDomain = 4,        ///< invalid parameters or geometry
  kInternal = 5,      ///< anything unexpected
};

/// Maps a library exception to its exit code.
int exit_code_for(const std::exception& e) noexcept;

/// Runs the command line. Results go to files (or `out` when the output path
/// is "-"); failures print one line on `err` of the form
/// `error code=<n> kind=<kind> message=<text>`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scatterblur::cli

#endif  // SCATTERBLUR_COMMANDS_HPP
