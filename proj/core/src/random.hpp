// Copyright 2026 The lisa Authors.
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
#ifndef LISA_SRC_RANDOM_HPP_
#define LISA_SRC_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace lisa::detail {

// Uniform in [-radius, radius) from the top 53 bits, identical on every
// standard library (unlike std::uniform_real_distribution).
inline double uniform_symmetric(std::mt19937_64& rng, double radius) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * unit - 1.0) * radius;
}

}  // namespace lisa::detail

#endif  // LISA_SRC_RANDOM_HPP_
