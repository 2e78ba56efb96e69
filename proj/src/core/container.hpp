// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surrogate.hpp"

namespace ptomo {

inline constexpr std::uint32_t kContainerVersion = 1;

/// Binary surrogate container. All integers and floats little-endian; every
/// field is preceded by its byte length as a u64.
std::vector<std::uint8_t> serialize_surrogate(const ParametricSurrogate& s);
ParametricSurrogate deserialize_surrogate(const std::vector<std::uint8_t>& bytes);

void write_surrogate(const std::string& path, const ParametricSurrogate& s);
ParametricSurrogate read_surrogate(const std::string& path);

}  // namespace ptomo
