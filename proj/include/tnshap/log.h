// Copyright 2026 The tnshap Authors.
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

#ifndef TNSHAP_LOG_H_
#define TNSHAP_LOG_H_

#include <sstream>

namespace tnshap {

// Diagnostics go to standard error; the level comes from TNSHAP_LOG
// (error | info | debug, default error).
enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel CurrentLogLevel();
void SetLogLevel(LogLevel level);

class LogMessage {
 public:
  explicit LogMessage(LogLevel level) : level_(level) {}
  ~LogMessage();
  LogMessage(const LogMessage&) = delete;
  LogMessage& operator=(const LogMessage&) = delete;

  template <typename T>
  LogMessage& operator<<(const T& value) {
    stream_ << value;
    return *this;
  }

 private:
  LogLevel level_;
  std::ostringstream stream_;
};

}  // namespace tnshap

#define TNSHAP_LOG(level)                                              \
  if (::tnshap::LogLevel::level > ::tnshap::CurrentLogLevel()) {       \
  } else                                                               \
    ::tnshap::LogMessage(::tnshap::LogLevel::level)

#endif  // TNSHAP_LOG_H_
