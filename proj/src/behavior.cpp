#include "mcl/behavior.hpp"

#include <set>

namespace mcl {

int SystemBehavior::clock_index(const std::string& name) const {
  for (std::size_t i = 0; i < clocks.size(); ++i)
    if (clocks[i].name == name) return static_cast<int>(i);
  return -1;
}

int SystemBehavior::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return -1;
}

const SyncMap* SystemBehavior::find_sync(const std::string& src,
                                         const std::string& dst) const {
  for (const auto& s : syncs)
    if (s.source == src && s.target == dst) return &s;
  return nullptr;
}

std::int64_t SystemBehavior::tick_count(const std::string& clock) const {
  const int ci = clock_index(clock);
  if (ci < 0) return 0;
  return traces[static_cast<std::size_t>(ci)].tick_count();
}

void SystemBehavior::validate() const {
  std::set<std::string> names;
  int physical = 0;
  for (const auto& c : clocks) {
    if (!names.insert(c.name).second)
      throw std::runtime_error("duplicate clock name: " + c.name);
    if (c.kind == ClockKind::Physical) ++physical;
  }
  if (physical != 1)
    throw std::runtime_error("behavior must have exactly one physical clock");
  if (traces.size() != clocks.size())
    throw std::runtime_error("one trace per clock required");

  for (const auto& v : variables) {
    if (!names.insert(v.name).second)
      throw std::runtime_error("duplicate name: " + v.name);
    if (clock_index(v.clock) < 0)
      throw std::runtime_error("variable " + v.name + " on unknown clock " +
                               v.clock);
  }

  for (std::size_t ci = 0; ci < clocks.size(); ++ci) {
    std::size_t nvars = 0;
    for (const auto& v : variables)
      if (v.clock == clocks[ci].name) ++nvars;
    for (const auto& row : traces[ci].valuations)
      if (row.size() != nvars)
        throw std::runtime_error("missing valuation on clock " +
                                 clocks[ci].name);
  }

  for (const auto& s : syncs) {
    const int si = clock_index(s.source), di = clock_index(s.target);
    if (si < 0 || di < 0)
      throw std::runtime_error("sync map over unknown clock");
    std::int64_t prev = -1;
    const std::int64_t dmax = traces[static_cast<std::size_t>(di)].tick_count();
    for (std::int64_t v : s.samples) {
      if (v < prev)
        throw std::runtime_error("sync map " + s.source + "->" + s.target +
                                 " not monotone");
      if (v >= dmax)
        throw std::runtime_error("sync map " + s.source + "->" + s.target +
                                 " points past target trace");
      prev = v;
    }
    if (s.samples.size() >
        static_cast<std::size_t>(traces[static_cast<std::size_t>(si)].tick_count()))
      throw std::runtime_error("sync map longer than source trace");
  }
}

BehaviorView BehaviorView::shifted(const std::string& clock,
                                   std::int64_t t) const {
  BehaviorView out = *this;
  const int ci = beh_->clock_index(clock);
  if (ci < 0) throw std::runtime_error("shift over unknown clock: " + clock);
  out.shifts_[static_cast<std::size_t>(ci)] += t;
  return out;
}

ReadResult<std::int64_t> BehaviorView::sync_lookup(int src, int dst,
                                                   std::int64_t x) const {
  const std::int64_t pos = x + shifts_[static_cast<std::size_t>(src)];
  if (src == dst) {
    // tau_c^c is the identity on recorded ticks.
    if (pos < 0 || pos >= beh_->traces[static_cast<std::size_t>(src)].tick_count())
      return {ReadStatus::OutOfTrace, 0};
    return {ReadStatus::Ok, pos};
  }
  const SyncMap* m = beh_->find_sync(beh_->clocks[static_cast<std::size_t>(src)].name,
                                     beh_->clocks[static_cast<std::size_t>(dst)].name);
  if (!m) return {ReadStatus::MissingSyncMap, 0};
  if (pos < 0 || pos >= static_cast<std::int64_t>(m->samples.size()))
    return {ReadStatus::OutOfTrace, 0};
  const std::int64_t tgt = m->samples[static_cast<std::size_t>(pos)];
  if (tgt < 0) return {ReadStatus::OutOfTrace, 0};
  return {ReadStatus::Ok, tgt};
}

ReadResult<Value> BehaviorView::read_variable(const std::string& observer,
                                              const std::string& var,
                                              std::int64_t pos) const {
  const int oi = beh_->clock_index(observer);
  if (oi < 0) return {ReadStatus::MissingSyncMap, {}};
  const int vi = beh_->variable_index(var);
  if (vi < 0) return {ReadStatus::UnknownVariable, {}};
  const auto& decl = beh_->variables[static_cast<std::size_t>(vi)];
  const int di = beh_->clock_index(decl.clock);

  const auto tgt = sync_lookup(oi, di, pos);
  if (!tgt.ok()) return {tgt.status, {}};
  const auto& trace = beh_->traces[static_cast<std::size_t>(di)];
  if (tgt.value >= trace.tick_count()) return {ReadStatus::OutOfTrace, {}};

  // Index of var within its clock's valuation row.
  std::size_t slot = 0;
  for (int i = 0; i < vi; ++i)
    if (beh_->variables[static_cast<std::size_t>(i)].clock == decl.clock) ++slot;
  return {ReadStatus::Ok,
          trace.valuations[static_cast<std::size_t>(tgt.value)][slot]};
}

double BehaviorView::clock_value(int clock_idx, std::int64_t tick) const {
  if (beh_->clocks[static_cast<std::size_t>(clock_idx)].kind ==
      ClockKind::Physical)
    return static_cast<double>(tick) * beh_->grid_step;
  return static_cast<double>(tick);
}

ReadResult<double> BehaviorView::read_clock(const std::string& observer,
                                            const std::string& target,
                                            std::int64_t pos) const {
  const int oi = beh_->clock_index(observer);
  const int ti = beh_->clock_index(target);
  if (oi < 0 || ti < 0) return {ReadStatus::MissingSyncMap, 0.0};
  const auto r = sync_lookup(oi, ti, pos);
  if (!r.ok()) return {r.status, 0.0};
  return {ReadStatus::Ok, clock_value(ti, r.value)};
}

ReadResult<double> BehaviorView::read_clock_pair(const std::string& observer,
                                                 const std::string& mid,
                                                 const std::string& target,
                                                 std::int64_t pos) const {
  const int oi = beh_->clock_index(observer);
  const int mi = beh_->clock_index(mid);
  const int ti = beh_->clock_index(target);
  if (oi < 0 || mi < 0 || ti < 0) return {ReadStatus::MissingSyncMap, 0.0};
  const auto first = sync_lookup(oi, mi, pos);
  if (!first.ok()) return {first.status, 0.0};
  // first.value is an absolute mid tick; sync_lookup applies mid's own shift.
  const auto second = sync_lookup(mi, ti, first.value);
  if (!second.ok()) return {second.status, 0.0};
  return {ReadStatus::Ok, clock_value(ti, second.value)};
}

}  // namespace mcl
