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

namespace qgen {

// Working precision of every tensor value. Training builds use 32-bit floats;
// gradient-check and tight-tolerance builds define QGEN_DOUBLE_PRECISION.
#if defined(QGEN_DOUBLE_PRECISION)
using Real = double;
inline constexpr const char* kRealTypeName = "f64";
#else
using Real = float;
inline constexpr const char* kRealTypeName = "f32";
#endif

}  // namespace qgen
