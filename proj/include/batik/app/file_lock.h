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

#ifndef BATIK_APP_FILE_LOCK_H_
#define BATIK_APP_FILE_LOCK_H_

#include <filesystem>

namespace batik::app {

// Advisory flock on "<path>.lock": shared for readers, exclusive for the
// single writer. Released on destruction.
class FileLock {
 public:
  enum class Mode { kShared, kExclusive };

  FileLock(const std::filesystem::path& path, Mode mode);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

  static std::filesystem::path LockPath(const std::filesystem::path& path);

 private:
  int fd_ = -1;
};

}  // namespace batik::app

#endif  // BATIK_APP_FILE_LOCK_H_
