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
#ifndef LISA_MODEL_IO_HPP_
#define LISA_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lisa/train.hpp"

namespace lisa {

inline constexpr int kModelFormatVersion = 1;

// Self-describing text document; reals printed with 17 significant digits so
// load followed by save reproduces the file byte for byte.
void save_model(std::ostream& out, const TrainedModel& m);
void save_model_file(const std::filesystem::path& path, const TrainedModel& m);
std::string model_to_string(const TrainedModel& m);

// Throws ModelFormat on malformed input.
TrainedModel load_model(std::istream& in);
TrainedModel load_model_file(const std::filesystem::path& path);

// Decimal with 17 significant digits, as written in model files.
std::string format_real(double value);

}  // namespace lisa

#endif  // LISA_MODEL_IO_HPP_
