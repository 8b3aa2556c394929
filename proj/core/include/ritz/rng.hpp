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

#ifndef RITZ_RNG_HPP
#define RITZ_RNG_HPP

#include <cstdint>

namespace ritz {

/// One splitmix64 step; advances the state and returns the next word.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic sub-stream derivation. Every component that needs fresh
/// randomness derives its own seed from (parent seed, stream id) so that runs
/// are reproducible from the single top-level seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256++ generator with hand-rolled uniform/normal transforms.
/// The standard-library distributions are implementation-defined, which
/// would break the byte-identical-rerun contract across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box–Muller (pairs cached, so draw order matters).
    double normal();

private:
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

} // namespace ritz

#endif // RITZ_RNG_HPP
