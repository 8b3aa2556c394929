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

#ifndef RITZ_ERRORS_HPP
#define RITZ_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ritz {

/// Dimension or architecture mismatch (wrong vector length, non-composing
/// layers, duplicate knots, ...).
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed configuration: unknown keys, bad values, unknown case names.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A recorded value or derivative became NaN/Inf. Carries the index of the
/// offending tape record when known.
struct NumericError : std::runtime_error {
    std::size_t record_index;
    NumericError(const std::string& what, std::size_t index)
        : std::runtime_error(what), record_index(index)
    {
    }
};

/// Training stopped on a non-finite loss.
struct TrainAbort : std::runtime_error {
    int step;
    double parameter_norm;
    TrainAbort(const std::string& what, int at_step, double norm)
        : std::runtime_error(what), step(at_step), parameter_norm(norm)
    {
    }
};

} // namespace ritz

#endif // RITZ_ERRORS_HPP
