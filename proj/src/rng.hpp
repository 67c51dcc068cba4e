/*
 Copyright 2026 The ofdm-pn Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef OFDMPN_RNG_HPP
#define OFDMPN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ofdmpn {

// splitmix64 finalizer; used to key one independent engine per
// (seed, stream) pair so trials can run on any worker without changing
// the draw sequence.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix64(seed ^ mix64(stream + 1)));
}

// Standard-normal draws via Box-Muller on explicitly constructed uniforms.
// std::normal_distribution is implementation-defined; this is not.
class NormalSampler {
public:
    explicit NormalSampler(std::mt19937_64 engine) : engine_(engine) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = ((engine_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = (engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ofdmpn

#endif
