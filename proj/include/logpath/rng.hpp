/*
 * Copyright (C) 2026 The logpath Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOGPATH_RNG_HPP
#define LOGPATH_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace logpath {

/// Seeded RNG with hand-rolled sampling on top of mt19937_64. The
/// standard distributions are implementation-defined, so outputs would
/// not be reproducible across toolchains; these helpers are.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, n). n must be positive.
    uint64_t below(uint64_t n) { return engine_() % n; }

    /// Uniform in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi)
    {
        return lo + static_cast<int64_t>(below(
                        static_cast<uint64_t>(hi - lo + 1)));
    }

    /// Uniform in [0, 1).
    double real()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool chance(double p) { return real() < p; }

    template <typename T> const T& pick(const std::vector<T>& items)
    {
        return items[below(items.size())];
    }

private:
    std::mt19937_64 engine_;
};

} // namespace logpath

#endif
