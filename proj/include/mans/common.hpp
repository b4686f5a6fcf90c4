// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mans {

// Error taxonomy; the C API maps these onto status codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, invalid shapes, unknown names.
struct InvalidArgument : Error {
    using Error::Error;
};

// Numeric failure at runtime: non-finite loss, sampler cap exceeded.
struct NumericError : Error {
    using Error::Error;
};

// Filesystem problems: unreadable or unwritable artifact files.
struct IoError : Error {
    using Error::Error;
};

// Round-trip safe decimal formatting (17 significant digits).
auto format_double(double x) -> std::string;
auto parse_double(const std::string& text) -> double;

auto inf_norm(std::span<const double> v) -> double;
auto two_norm(std::span<const double> v) -> double;
auto dot(std::span<const double> a, std::span<const double> b) -> double;

} // namespace mans
