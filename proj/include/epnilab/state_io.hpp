// Copyright 2026 The epnilab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPNILAB_STATE_IO_HPP_
#define EPNILAB_STATE_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "epnilab/fock.hpp"

namespace epnilab {

// Binary state container, little-endian throughout:
//
//   offset  size      field
//   0       8         magic "EPNSTATE"
//   8       4         u32 format version (1)
//   12      4         u32 kind: 0 = pure state, 1 = density operator
//   16      4         u32 mode count n
//   20      4n        u32 per-mode truncation dimensions
//   20+4n   8         f64 discarded (pre-normalization) mass
//   28+4n   16·E      entries as (re, im) f64 pairs; E = D for a pure state,
//                     D² (row-major) for a density operator, D = Π dims
using StateVariant = std::variant<PureState, DensityOperator>;

void write_state(std::ostream& out, const PureState& psi);
void write_state(std::ostream& out, const DensityOperator& rho);
void write_state(const std::filesystem::path& path, const StateVariant& state);

// Throws InvalidArgument on malformed or truncated input. The file overload
// also rejects trailing bytes.
StateVariant read_state(std::istream& in);
StateVariant read_state(const std::filesystem::path& path);

}  // namespace epnilab

#endif  // EPNILAB_STATE_IO_HPP_
