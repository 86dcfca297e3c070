#pragma once

#include <string>

#include "mcl/behavior.hpp"

namespace mcl {

/// Deterministic text encoding of a SystemBehavior: identical behaviors
/// produce byte-identical documents. Doubles are written as decimal with an
/// explicit exponent (%.17e) so decode(encode(b)) reads back exactly.
std::string encode_trace(const SystemBehavior& b);

/// Inverse of encode_trace. Throws std::runtime_error on malformed input.
SystemBehavior decode_trace(const std::string& text);

std::string format_double(double v);

}  // namespace mcl
