// Copyright 2026 The latentshape Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Little-endian scalar helpers for the binary containers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "lshape/error.hpp"

namespace lshape::detail {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian targets are not supported");

template <class T>
T byteswap_if_big(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

inline void get_bytes(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw ParseError("unexpected end of file");
  }
}

template <class T>
void put_scalar(std::ostream& out, T v) {
  v = byteswap_if_big(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get_scalar(std::istream& in) {
  T v;
  get_bytes(in, reinterpret_cast<char*>(&v), sizeof(T));
  return byteswap_if_big(v);
}

inline void put_u32(std::ostream& out, std::uint32_t v) { put_scalar(out, v); }
inline void put_u64(std::ostream& out, std::uint64_t v) { put_scalar(out, v); }
inline void put_f64(std::ostream& out, double v) { put_scalar(out, v); }
inline std::uint32_t get_u32(std::istream& in) { return get_scalar<std::uint32_t>(in); }
inline std::uint64_t get_u64(std::istream& in) { return get_scalar<std::uint64_t>(in); }
inline double get_f64(std::istream& in) { return get_scalar<double>(in); }

inline void put_f64_array(std::ostream& out, const double* v, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(v), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) put_f64(out, v[i]);
  }
}

inline void get_f64_array(std::istream& in, double* v, std::size_t n) {
  get_bytes(in, reinterpret_cast<char*>(v), n * sizeof(double));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < n; ++i) v[i] = byteswap_if_big(v[i]);
  }
}

}  // namespace lshape::detail
