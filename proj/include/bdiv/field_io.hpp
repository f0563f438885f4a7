#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdiv/field.hpp"

namespace bdiv {

/// Field file layout (all little-endian):
///   "BDIV1" | u8 d | d x u32 n_i | d x f64 lo_i | d x f64 hi_i | u8 periodic mask |
///   prod(n_i) x f64 values, row-major with the last axis fastest.
std::vector<std::uint8_t> encode_field(const ScalarField& f);
ScalarField decode_field(const std::vector<std::uint8_t>& bytes);

ScalarField read_field(const std::string& path);
void write_field(const ScalarField& f, const std::string& path);

}  // namespace bdiv
