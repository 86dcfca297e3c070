#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace mcl {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Term of the local syntax: symbols read at tick offsets (with an optional
/// trajectory time argument), clock pairs, constants, and arithmetic.
struct Term {
  enum class Kind { Symbol, ClockPair, Const, Add, Sub, Mul };

  Kind kind = Kind::Const;
  std::string name;           // Symbol / ClockPair source
  std::int64_t offset = 0;    // tick offset, default 0
  TermPtr traj_time;          // Symbol: optional trajectory time expression
  std::string pair_target;    // ClockPair: name^pair_target(offset)
  double value = 0.0;         // Const
  TermPtr lhs, rhs;           // Add/Sub/Mul

  static TermPtr symbol(std::string n, std::int64_t off = 0,
                        TermPtr traj = nullptr);
  static TermPtr clock_pair(std::string mid, std::string target,
                            std::int64_t off);
  static TermPtr constant(double v);
  static TermPtr arith(Kind k, TermPtr a, TermPtr b);
};

enum class CmpOp : std::uint8_t { Lt, Le, Eq, Ne, Gt, Ge };

struct LocalFormula;
using LocalPtr = std::shared_ptr<const LocalFormula>;

/// Local (clock-bound) formula: predicates over terms, propositional
/// connectives, if/then/else, and the bounded/unbounded F and G modalities
/// with interval bounds in ticks of the bound clock.
struct LocalFormula {
  enum class Kind {
    TrueLit,
    FalseLit,
    Atom,
    Cmp,
    Not,
    And,
    Or,
    Implies,
    IfThenElse,
    Eventually,
    Globally,
  };

  Kind kind = Kind::TrueLit;
  std::string pred;                    // Atom
  std::vector<TermPtr> args, params;   // Atom
  CmpOp op = CmpOp::Lt;                // Cmp
  TermPtr tl, tr;                      // Cmp
  LocalPtr a, b, c;                    // children
  std::int64_t lo = 0, hi = 0;         // modal bounds
  bool unbounded = false;              // hi == infinity

  static LocalPtr lit(bool v);
  static LocalPtr atom(std::string pred, std::vector<TermPtr> args,
                       std::vector<TermPtr> params);
  static LocalPtr cmp(CmpOp op, TermPtr l, TermPtr r);
  static LocalPtr negate(LocalPtr x);
  static LocalPtr binary(Kind k, LocalPtr x, LocalPtr y);
  static LocalPtr ite(LocalPtr cond, LocalPtr then_f, LocalPtr else_f);
  static LocalPtr modal(Kind k, std::int64_t lo, std::int64_t hi,
                        bool unbounded, LocalPtr body);
};

struct GlobalFormula;
using GlobalPtr = std::shared_ptr<const GlobalFormula>;

/// Global formula: clock binds of local formulas under propositional
/// connectives. Every leaf is a ClockBind.
struct GlobalFormula {
  enum class Kind { Bind, Not, And, Or, Implies };

  Kind kind = Kind::Bind;
  std::string clock;  // Bind
  LocalPtr body;      // Bind
  GlobalPtr a, b;

  static GlobalPtr bind(std::string clock, LocalPtr body);
  static GlobalPtr negate(GlobalPtr x);
  static GlobalPtr binary(Kind k, GlobalPtr x, GlobalPtr y);
};

bool structurally_equal(const TermPtr& a, const TermPtr& b);
bool structurally_equal(const LocalPtr& a, const LocalPtr& b);
bool structurally_equal(const GlobalPtr& a, const GlobalPtr& b);

/// Canonical text form; parse(print(f)) is structurally equal to f.
std::string print(const GlobalPtr& f);
std::string print(const LocalPtr& f);
std::string print(const TermPtr& t);

const char* to_string(CmpOp op);

}  // namespace mcl
