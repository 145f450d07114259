// Copyright 2026 The middrive Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace middrive {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed record in a JSONL file; carries the 1-based line number.
struct SchemaError : std::runtime_error {
  SchemaError(std::size_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  std::size_t line;
};

}  // namespace middrive
