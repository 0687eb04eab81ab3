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

#include "batik/app/cli.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <memory>

#include "batik/core/error.h"
#include "batik/core/text.h"
#include "commands.h"

namespace batik::app {

using nlohmann::json;

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

void WriteJson(const std::string& path, const json& doc) {
  WriteFile(path, doc.dump(2) + "\n");
}

std::string AlignedPairs(const std::vector<std::pair<std::string, std::string>>& rows) {
  size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, DisplayWidth(k));
  std::string out;
  for (const auto& [k, v] : rows) {
    out += k + ":" + std::string(width - DisplayWidth(k) + 1, ' ') + v + "\n";
  }
  return out;
}

namespace {

struct Parsed {
  std::unique_ptr<CLI::App> app;
  std::unique_ptr<Context> ctx;
};

std::unique_ptr<CLI::App> Build(Context& ctx) {
  auto app = std::make_unique<CLI::App>(
      "batik: pattern knowledge graph and classifier toolkit", "batik");
  app->require_subcommand(1);
  app->fallthrough();
  app->add_option("--seed", ctx.global.seed, "Random seed for every stochastic step")
      ->capture_default_str();
  app->add_option("--config", ctx.global.config,
                  "JSON file with option defaults (CLI flags take precedence)");
  app->add_flag("--quiet", ctx.global.quiet, "Suppress reports and progress output");
  RegisterKgCommands(*app, ctx);
  RegisterVisionCommands(*app, ctx);
  return app;
}

std::string EnvName(const std::string& scope, const std::string& option) {
  std::string name = "BATIK_";
  if (!scope.empty()) name += scope + "_";
  name += option;
  for (char& c : name) {
    c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

bool Truthy(std::string v) {
  for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return v == "1" || v == "true" || v == "yes" || v == "on";
}

std::string JsonScalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return FormatDouble(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw ConfigError("config key '" + key + "' must be a scalar or a list of scalars");
}

// Arguments for every option left unset on the command line, taken from the
// config section first and the environment second.
std::vector<std::string> LayeredArgs(const CLI::App& scope_app, const std::string& scope,
                                     const json* section, const EnvLookup& env) {
  std::vector<std::string> extra;
  for (const CLI::Option* opt : scope_app.get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    const bool is_flag = opt->get_type_size() == 0;
    std::vector<std::string> values;
    if (section && section->contains(name)) {
      const json& v = (*section)[name];
      if (v.is_array()) {
        for (const json& e : v) values.push_back(JsonScalar(e, name));
      } else {
        values.push_back(JsonScalar(v, name));
      }
    } else if (auto e = env(EnvName(scope, name))) {
      values.push_back(*e);
    }
    for (const std::string& v : values) {
      if (is_flag) {
        if (Truthy(v)) extra.push_back("--" + name);
      } else {
        extra.push_back("--" + name);
        extra.push_back(v);
      }
    }
  }
  return extra;
}

json LoadConfig(const std::string& path) {
  const std::string text = ReadFile(path);
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("config " + path + " must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw SyntaxError("config " + path + ": " + e.what());
  }
}

int ParseInto(CLI::App& app, std::vector<std::string> args, const Io& io, bool* done) {
  *done = false;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
    return 0;
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
  } catch (const CLI::ParseError& e) {
    // A help request on a subcommand surfaces as CallForHelp from there.
    if (e.get_exit_code() == 0) {
      io.out << app.help();
    } else {
      io.err << "error: " << e.what() << "\n";
      io.err << "run with --help for usage\n";
      *done = true;
      return ExitCodeFor(ErrorKind::kConfig);
    }
  }
  *done = true;
  return 0;
}

// The first pass only discovers which options were given; required options
// may still come from the config or the environment.
void RelaxRequired(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) opt->required(false);
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) RelaxRequired(*sub);
}

const CLI::App* Selected(const CLI::App& app) {
  auto subs = app.get_subcommands();
  return subs.empty() ? nullptr : subs.front();
}

}  // namespace

int Run(const std::vector<std::string>& args, const Io& io) {
  try {
    auto ctx = std::make_unique<Context>();
    ctx->io = &io;
    auto app = Build(*ctx);
    RelaxRequired(*app);
    bool done = false;
    int code = ParseInto(*app, args, io, &done);
    if (done) return code;

    // Re-parse with config and environment values for unset options.
    std::string config_path = ctx->global.config;
    if (config_path.empty()) config_path = io.env("BATIK_CONFIG").value_or("");
    json config = config_path.empty() ? json::object() : LoadConfig(config_path);
    const CLI::App* sub = Selected(*app);
    const json* sub_section = nullptr;
    if (sub && config.contains(sub->get_name())) {
      sub_section = &config[sub->get_name()];
      if (!sub_section->is_object()) {
        throw ConfigError("config section '" + sub->get_name() + "' must be an object");
      }
    }
    std::vector<std::string> global_extra = LayeredArgs(*app, "", &config, io.env);
    std::vector<std::string> sub_extra;
    if (sub) sub_extra = LayeredArgs(*sub, sub->get_name(), sub_section, io.env);
    std::vector<std::string> merged = global_extra;
    bool inserted = false;
    for (const std::string& a : args) {
      merged.push_back(a);
      if (!inserted && sub && a == sub->get_name()) {
        merged.insert(merged.end(), sub_extra.begin(), sub_extra.end());
        inserted = true;
      }
    }
    ctx = std::make_unique<Context>();
    ctx->io = &io;
    app = Build(*ctx);
    code = ParseInto(*app, merged, io, &done);
    if (done) return code;
    sub = Selected(*app);
    auto it = ctx->actions.find(sub);
    if (it == ctx->actions.end()) throw ConfigError("no command selected");
    it->second();
    return 0;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::bad_alloc&) {
    io.err << "error: out of memory\n";
    return ExitCodeFor(ErrorKind::kNumeric);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return ExitCodeFor(ErrorKind::kIo);
  }
}

}  // namespace batik::app
