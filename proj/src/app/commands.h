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

#ifndef BATIK_SRC_APP_COMMANDS_H_
#define BATIK_SRC_APP_COMMANDS_H_

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>

#include <json.hpp>

#include "batik/app/cli.h"

namespace batik::app {

struct GlobalOptions {
  uint64_t seed = 1;
  std::string config;
  bool quiet = false;
};

struct Context {
  const Io* io = nullptr;
  GlobalOptions global;
  std::map<const CLI::App*, std::function<void()>> actions;

  // Results always go to stdout; reports and progress honor --quiet.
  std::ostream& out() const { return io->out; }
  void Report(const std::string& text) const {
    if (!global.quiet) io->out << text;
  }
  void Progress(const std::string& line) const {
    if (!global.quiet) io->err << line << "\n";
  }
};

void RegisterKgCommands(CLI::App& app, Context& ctx);
void RegisterVisionCommands(CLI::App& app, Context& ctx);

// Pretty-printed JSON plus trailing newline.
void WriteJson(const std::string& path, const nlohmann::json& doc);

// "key: value" lines with keys padded to a common width.
std::string AlignedPairs(const std::vector<std::pair<std::string, std::string>>& rows);

}  // namespace batik::app

#endif  // BATIK_SRC_APP_COMMANDS_H_
