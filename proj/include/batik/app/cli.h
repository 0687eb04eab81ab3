// Copyright 2026 The Batik KG Authors.
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

#ifndef BATIK_APP_CLI_H_
#define BATIK_APP_CLI_H_

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace batik::app {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
std::optional<std::string> ProcessEnv(const std::string& name);

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  EnvLookup env = ProcessEnv;
};

// Runs one `batik` invocation; `args` excludes the program name. Returns the
// process exit code: 0 success, 1 I/O, 2 syntax, 3 schema/config/usage,
// 4 numeric failure.
int Run(const std::vector<std::string>& args, const Io& io);

}  // namespace batik::app

#endif  // BATIK_APP_CLI_H_
