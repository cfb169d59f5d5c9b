// Copyright (c) 2026 pathvc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATHVC_CSV_H_
#define PATHVC_CSV_H_

#include <string>
#include <vector>

namespace pathvc::csv {

/// Splits one line of RFC 4180 style CSV (double-quoted fields, "" escapes).
std::vector<std::string> SplitLine(const std::string& line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string Escape(const std::string& field);

std::string JoinLine(const std::vector<std::string>& fields);

/// Shortest decimal form that parses back to exactly `v`.
std::string FormatExact(double v);

/// Fixed two-decimal presentation form.
std::string FormatFixed(double v, int decimals = 2);

/// Strict parse of a decimal number; false on trailing garbage.
bool ParseDouble(const std::string& text, double* out);

}  // namespace pathvc::csv

#endif  // PATHVC_CSV_H_
