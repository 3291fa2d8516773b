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

#include "epnilab/state_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "epnilab/errors.hpp"

namespace epnilab {

namespace {

constexpr std::array<char, 8> kMagic = {'E', 'P', 'N', 'S', 'T', 'A', 'T', 'E'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "state container I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw InvalidArgument("state container: unexpected end of data");
  return value;
}

void write_header(std::ostream& out, std::uint32_t kind, const ModeDims& dims,
                  double discarded) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, kind);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dims.size()));
  for (int d : dims) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  put<double>(out, discarded);
}

void put_complex(std::ostream& out, Complex z) {
  put<double>(out, z.real());
  put<double>(out, z.imag());
}

Complex get_complex(std::istream& in) {
  const double re = get<double>(in);
  const double im = get<double>(in);
  return {re, im};
}

}  // namespace

void write_state(std::ostream& out, const PureState& psi) {
  write_header(out, 0, psi.mode_dims(), psi.discarded_mass());
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    put_complex(out, psi.amplitudes()(i));
  }
}

void write_state(std::ostream& out, const DensityOperator& rho) {
  write_header(out, 1, rho.mode_dims(), rho.discarded_mass());
  const auto& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_complex(out, m(i, j));
  }
}

void write_state(const std::filesystem::path& path, const StateVariant& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  std::visit([&](const auto& s) { write_state(out, s); }, state);
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

StateVariant read_state(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw InvalidArgument("state container: bad magic");
  }
  if (get<std::uint32_t>(in) != kVersion) {
    throw InvalidArgument("state container: unsupported version");
  }
  const auto kind = get<std::uint32_t>(in);
  if (kind > 1) throw InvalidArgument("state container: unknown kind");
  const auto n = get<std::uint32_t>(in);
  if (n == 0 || n > 64) throw InvalidArgument("state container: bad mode count");
  ModeDims dims(n);
  for (auto& d : dims) {
    const auto v = get<std::uint32_t>(in);
    if (v == 0 || v > kMaxTotalDimension) {
      throw InvalidArgument("state container: bad mode dimension");
    }
    d = static_cast<int>(v);
  }
  const std::size_t total = total_dimension(dims);
  if (total > kMaxTotalDimension) {
    throw InvalidArgument("state container: total dimension exceeds limit");
  }
  const double discarded = get<double>(in);
  const auto size = static_cast<Eigen::Index>(total);
  if (kind == 0) {
    Eigen::VectorXcd amps(size);
    for (Eigen::Index i = 0; i < size; ++i) amps(i) = get_complex(in);
    return PureState(std::move(amps), std::move(dims), discarded);
  }
  Eigen::MatrixXcd m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) m(i, j) = get_complex(in);
  }
  return DensityOperator(std::move(m), std::move(dims), discarded);
}

StateVariant read_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  StateVariant state = read_state(in);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw InvalidArgument("state container: trailing bytes after the entries");
  }
  return state;
}

}  // namespace epnilab
