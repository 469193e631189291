// Copyright 2026 The region_al Authors
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


#ifndef REGION_AL_CLI_H_
#define REGION_AL_CLI_H_

#include <ostream>

namespace region_al {

inline constexpr const char* kVersion = "0.1.0";

// Subcommands select, simulate, report and gen-synthetic. Returns 0 on
// success, 1 on usage errors and 2 on data, validation or I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace region_al

#endif  // REGION_AL_CLI_H_
