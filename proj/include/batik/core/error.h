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

#ifndef BATIK_CORE_ERROR_H_
#define BATIK_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace batik {

// Error categories. Each maps onto one process exit code of the CLI.
enum class ErrorKind {
  kIo,          // unreadable/unwritable files, truncated records
  kSyntax,      // malformed query text, rule lines, parse files
  kSchema,      // ontology violations, unknown labels
  kConfig,      // invalid configuration or mismatched inputs
  kNumeric,     // non-finite values in numeric code
  kInvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error IoError(const std::string& m) { return Error(ErrorKind::kIo, m); }
inline Error SyntaxError(const std::string& m) {
  return Error(ErrorKind::kSyntax, m);
}
inline Error SchemaError(const std::string& m) {
  return Error(ErrorKind::kSchema, m);
}
inline Error ConfigError(const std::string& m) {
  return Error(ErrorKind::kConfig, m);
}
inline Error NumericError(const std::string& m) {
  return Error(ErrorKind::kNumeric, m);
}
inline Error InvalidArgument(const std::string& m) {
  return Error(ErrorKind::kInvalidArgument, m);
}

// 0 success, 1 I/O, 2 syntax, 3 schema/config, 4 numeric failure.
int ExitCodeFor(ErrorKind kind);

}  // namespace batik

#endif  // BATIK_CORE_ERROR_H_
