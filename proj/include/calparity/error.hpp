/*
 * Copyright 2026 The calparity Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CALPARITY_ERROR_HPP_
#define CALPARITY_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace calparity {

enum class ErrorKind {
  kInvalidArgument,  // precondition violated by the caller
  kParse,            // malformed input file
  kIo,               // file could not be opened/written
  kInfeasible,       // instance has no solution under the requested constraints
  kDegenerate,       // quantity undefined (0/0, dependent constraints)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::kInvalidArgument, what);
}

}  // namespace calparity

#endif  // CALPARITY_ERROR_HPP_
