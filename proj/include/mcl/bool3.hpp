#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mcl {

/// Strong-Kleene three-valued truth value. Unknown marks verdicts a longer
/// trace could still resolve either way.
enum class Bool3 : std::uint8_t { False = 0, Unknown = 1, True = 2 };

constexpr Bool3 b3_not(Bool3 a) {
  return static_cast<Bool3>(2 - static_cast<int>(a));
}

constexpr Bool3 b3_and(Bool3 a, Bool3 b) { return a < b ? a : b; }
constexpr Bool3 b3_or(Bool3 a, Bool3 b) { return a > b ? a : b; }
constexpr Bool3 b3_implies(Bool3 a, Bool3 b) { return b3_or(b3_not(a), b); }

constexpr Bool3 b3_of(bool b) { return b ? Bool3::True : Bool3::False; }

inline const char* to_string(Bool3 v) {
  switch (v) {
    case Bool3::False: return "False";
    case Bool3::Unknown: return "Inconclusive";
    default: return "True";
  }
}

/// Monitoring outcome. The witness is the tick index that settled the
/// verdict (an eventually-witness for True, a counterexample tick for False).
struct Verdict {
  Bool3 value = Bool3::Unknown;
  std::optional<std::int64_t> witness;

  bool is_true() const { return value == Bool3::True; }
  bool is_false() const { return value == Bool3::False; }
  bool inconclusive() const { return value == Bool3::Unknown; }
};

}  // namespace mcl
