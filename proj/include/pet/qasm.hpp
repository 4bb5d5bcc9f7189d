// Copyright 2026 The PET Authors
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

#include <string>
#include <string_view>

#include "pet/qcore.hpp"

namespace pet {

/// Parse failure with 1-based line and column of the offending token.
class QasmSyntaxError : public Error {
 public:
  QasmSyntaxError(int line, int column, const std::string &message);
  int line() const { return line_; }
  int column() const { return column_; }
  /// The message without the position prefix.
  const std::string &detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/**
 * Reads the assembly subset: an optional `OPENQASM` version line,
 * `include` lines, `qreg`/`creg` declarations, calls to gates of the qcore
 * alphabet with linear-expression arguments, and `measure q[i] [-> c[j]]`.
 * Registers are laid out in declaration order.  `//` starts a comment.
 */
Circuit parse_qasm_subset(std::string_view text);

/// Single `q` register, measurements into a matching `c` register.
std::string to_qasm_subset(const Circuit &c);

}  // namespace pet
