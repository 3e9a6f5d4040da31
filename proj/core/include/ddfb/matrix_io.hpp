// SPDX-License-Identifier: Apache-2.0
//
// ddfb: limited-feedback sparse channel estimation for massive MIMO
// Copyright (C) 2026 The ddfb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include "ddfb/numerics.hpp"

#include <filesystem>
#include <iosfwd>

namespace ddfb {

// Debug export format for dictionaries and protocol matrices.
//
//   line 1 (ASCII):  "DDFBMAT <complex|real> <rows> <cols>\n"
//   payload:         rows * cols entries in column-major order, each entry a
//                    little-endian IEEE-754 float64 (real) or a pair of them
//                    (real part, imaginary part).

void write_matrix(std::ostream& os, const ComplexMatrix& m);
void write_matrix(std::ostream& os, const RealMatrix& m);
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m);
void write_matrix(const std::filesystem::path& path, const RealMatrix& m);

/// Reads either kind; real files come back with zero imaginary parts.
ComplexMatrix read_matrix(std::istream& is);
ComplexMatrix read_matrix(const std::filesystem::path& path);

}  // namespace ddfb
