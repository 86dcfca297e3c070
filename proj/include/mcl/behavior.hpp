#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mcl/trajectory.hpp"

namespace mcl {

enum class ClockKind : std::uint8_t { Discrete, Physical };

struct ClockDecl {
  std::string name;
  ClockKind kind = ClockKind::Discrete;
};

enum class ValueShape : std::uint8_t { Scalar, Vector, TrajectoryShape };

struct VariableDecl {
  std::string name;
  std::string clock;
  ValueShape shape = ValueShape::Scalar;
  int dim = 1;  // vector dimension when shape == Vector
};

using Value = std::variant<double, Eigen::VectorXd, Trajectory>;

/// Valuations of one clock's variables, one entry per tick. Tick indices run
/// 0,1,2,... densely; the physical clock's ticks are the integration grid.
struct ClockTrace {
  std::string clock;
  // valuations[t][v] = value of the v-th declared variable of this clock at
  // tick t (declaration order).
  std::vector<std::vector<Value>> valuations;

  std::int64_t tick_count() const {
    return static_cast<std::int64_t>(valuations.size());
  }
};

/// Sampled synchronization map tau_c^d: for each source tick, the target
/// index whose data the source host observes. -1 records "no target data
/// observed yet". Monotone nondecreasing.
struct SyncMap {
  std::string source;
  std::string target;
  std::vector<std::int64_t> samples;
};

enum class ReadStatus : std::uint8_t {
  Ok,
  OutOfTrace,
  UnknownVariable,
  MissingSyncMap,
};

template <typename T>
struct ReadResult {
  ReadStatus status = ReadStatus::Ok;
  T value{};

  bool ok() const { return status == ReadStatus::Ok; }
};

/// One recorded multiclock execution: per-clock valuation traces plus the
/// sampled synchronization maps. Immutable once recorded.
class SystemBehavior {
 public:
  std::vector<ClockDecl> clocks;
  std::vector<VariableDecl> variables;
  std::vector<ClockTrace> traces;  // parallel to clocks
  std::vector<SyncMap> syncs;
  double grid_step = 1e-3;  // physical clock step h (seconds)

  int clock_index(const std::string& name) const;
  int variable_index(const std::string& name) const;
  bool has_clock(const std::string& name) const {
    return clock_index(name) >= 0;
  }
  bool has_variable(const std::string& name) const {
    return variable_index(name) >= 0;
  }
  const SyncMap* find_sync(const std::string& src,
                           const std::string& dst) const;

  std::int64_t tick_count(const std::string& clock) const;

  /// Checks structural invariants (unique names, exactly one physical clock,
  /// dense ticks, monotone causal syncs). Throws std::runtime_error.
  void validate() const;
};

/// Read-only view implementing the (c,t)-execution shift: every sync map
/// whose source clock is shifted reads tau(x + t). Cheap to copy.
class BehaviorView {
 public:
  explicit BehaviorView(const SystemBehavior& b)
      : beh_(&b), shifts_(b.clocks.size(), 0) {}

  const SystemBehavior& behavior() const { return *beh_; }

  /// The (clock, t)-execution of this view; shifts compose additively.
  BehaviorView shifted(const std::string& clock, std::int64_t t) const;

  std::int64_t shift_of(int clock_idx) const { return shifts_[clock_idx]; }

  /// tau_src^dst(x) under this view's shifts. OutOfTrace when the shifted
  /// source tick is not recorded or the sample is -1.
  ReadResult<std::int64_t> sync_lookup(int src, int dst, std::int64_t x) const;

  /// Interp case lambda = v: value of `var` as observed from `observer` at
  /// source tick `pos`.
  ReadResult<Value> read_variable(const std::string& observer,
                                  const std::string& var,
                                  std::int64_t pos) const;

  /// Interp case lambda = d: clock value tau_obs^target(pos). Discrete
  /// targets yield the tick index, the physical target yields grid seconds.
  ReadResult<double> read_clock(const std::string& observer,
                                const std::string& target,
                                std::int64_t pos) const;

  /// Interp case lambda = d^d': tau_mid^target(tau_obs^mid(pos)).
  ReadResult<double> read_clock_pair(const std::string& observer,
                                     const std::string& mid,
                                     const std::string& target,
                                     std::int64_t pos) const;

 private:
  double clock_value(int clock_idx, std::int64_t tick) const;

  const SystemBehavior* beh_;
  std::vector<std::int64_t> shifts_;
};

/// The (c,t)-execution as a standalone operation (Def. of the shifted
/// execution); view-based, no data is copied.
inline BehaviorView shift_execution(const BehaviorView& v,
                                    const std::string& clock, std::int64_t t) {
  return v.shifted(clock, t);
}

}  // namespace mcl
