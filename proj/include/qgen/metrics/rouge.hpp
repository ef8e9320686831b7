/* Copyright 2026 The qgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <span>
#include <string>

namespace qgen::metrics {

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// LCS F-measure, recall weighted by beta (1.2 by convention). Throws
// DomainError when either side is empty.
double rouge_l(std::span<const std::string> hypothesis, std::span<const std::string> reference,
               double beta = 1.2);

}  // namespace qgen::metrics
