// Copyright 2026 The shewpt Authors
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

#pragma once

// Roots of the two harmonic-elimination systems, frozen from an independent
// solve (scipy fsolve to 1e-16 residual) and confirmed by the grid oracle.

#include <vector>

namespace fixtures {

// {3,5,7}, branch nearest (11, 41, 85) deg.
inline const std::vector<double> kRoot3Deg = {11.99197854, 41.92788349, 85.67477071};
// {3,5,7,9}, branch nearest (9, 26, 50, 86) deg.
inline const std::vector<double> kRoot4Deg = {9.42857143, 26.57142857, 50.57142857, 86.57142857};

inline const std::vector<double> kNominal3Deg = {11.0, 41.0, 85.0};
inline const std::vector<double> kNominal4Deg = {9.0, 26.0, 50.0, 86.0};

inline const std::vector<int> kOrders3 = {3, 5, 7};
inline const std::vector<int> kOrders4 = {3, 5, 7, 9};

}  // namespace fixtures
