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
#include "ddfb/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ddfb {

namespace {

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  std::array<char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xffU);
  os.write(buf.data(), buf.size());
}

double get_f64(std::istream& is) {
  std::array<unsigned char, 8> buf{};
  if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    throw std::runtime_error("read_matrix: truncated payload");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | buf[static_cast<std::size_t>(i)];
  double v = 0.0;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << "DDFBMAT complex " << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.size(); ++i) {
    put_f64(os, m.data()[i].real());
    put_f64(os, m.data()[i].imag());
  }
}

void write_matrix(std::ostream& os, const RealMatrix& m) {
  os << "DDFBMAT real " << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.size(); ++i) put_f64(os, m.data()[i]);
}

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
  auto os = open_out(path);
  write_matrix(os, m);
}

void write_matrix(const std::filesystem::path& path, const RealMatrix& m) {
  auto os = open_out(path);
  write_matrix(os, m);
}

ComplexMatrix read_matrix(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("read_matrix: missing header");
  std::istringstream hs(header);
  std::string magic, kind;
  Index rows = -1, cols = -1;
  hs >> magic >> kind >> rows >> cols;
  if (magic != "DDFBMAT" || (kind != "complex" && kind != "real") || rows < 0 || cols < 0)
    throw std::runtime_error("read_matrix: malformed header '" + header + "'");
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) {
    const double re = get_f64(is);
    const double im = kind == "complex" ? get_f64(is) : 0.0;
    m.data()[i] = cdouble(re, im);
  }
  return m;
}

ComplexMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_matrix(is);
}

}  // namespace ddfb
