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

#include "batik/app/file_lock.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "batik/core/error.h"

namespace batik::app {

std::filesystem::path FileLock::LockPath(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".lock");
}

FileLock::FileLock(const std::filesystem::path& path, Mode mode) {
  const std::filesystem::path lock = LockPath(path);
  if (mode == Mode::kShared) {
    // Readers never create the lock file: without one no writer is active.
    fd_ = ::open(lock.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0 && errno == ENOENT) return;
  } else {
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  }
  if (fd_ < 0) {
    throw IoError("cannot open lock file " + lock.string() + ": " + std::strerror(errno));
  }
  int rc;
  do {
    rc = ::flock(fd_, mode == Mode::kShared ? LOCK_SH : LOCK_EX);
  } while (rc != 0 && errno == EINTR);
  if (rc != 0) {
    const int e = errno;
    ::close(fd_);
    throw IoError("cannot lock " + lock.string() + ": " + std::strerror(e));
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace batik::app
