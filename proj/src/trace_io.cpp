#include "mcl/trace_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace mcl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

namespace {

void put_value(std::string& out, const Value& val) {
  if (std::holds_alternative<double>(val)) {
    out += " s ";
    out += format_double(std::get<double>(val));
  } else if (std::holds_alternative<Eigen::VectorXd>(val)) {
    const auto& v = std::get<Eigen::VectorXd>(val);
    out += " v ";
    out += std::to_string(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      out += ' ';
      out += format_double(v(i));
    }
  } else {
    const auto& t = std::get<Trajectory>(val);
    out += " t ";
    out += std::to_string(t.segments().size());
    out += ' ';
    out += format_double(t.segment_dt());
    for (const auto& seg : t.segments())
      for (double c : seg) {
        out += ' ';
        out += format_double(c);
      }
  }
}

class Tokens {
 public:
  explicit Tokens(const std::string& text) : in_(text) {}

  std::string next() {
    std::string t;
    if (!(in_ >> t)) throw std::runtime_error("trace: unexpected end of input");
    return t;
  }
  std::int64_t next_i64() { return std::stoll(next()); }
  double next_double() { return std::stod(next()); }

  void expect(const char* word) {
    const std::string t = next();
    if (t != word)
      throw std::runtime_error(std::string("trace: expected '") + word +
                               "', got '" + t + "'");
  }

 private:
  std::istringstream in_;
};

Value get_value(Tokens& tk) {
  const std::string kind = tk.next();
  if (kind == "s") return Value{tk.next_double()};
  if (kind == "v") {
    const auto n = tk.next_i64();
    Eigen::VectorXd v(n);
    for (std::int64_t i = 0; i < n; ++i) v(i) = tk.next_double();
    return Value{std::move(v)};
  }
  if (kind == "t") {
    const auto nsegs = tk.next_i64();
    const double dt = tk.next_double();
    std::vector<std::array<double, 4>> segs(static_cast<std::size_t>(nsegs));
    for (auto& seg : segs)
      for (double& c : seg) c = tk.next_double();
    return Value{Trajectory(dt, std::move(segs))};
  }
  throw std::runtime_error("trace: bad value tag '" + kind + "'");
}

}  // namespace

std::string encode_trace(const SystemBehavior& b) {
  std::string out;
  out.reserve(1 << 20);
  out += "mcltrace 1\n";
  out += "grid_step ";
  out += format_double(b.grid_step);
  out += "\nclocks ";
  out += std::to_string(b.clocks.size());
  out += '\n';
  for (const auto& c : b.clocks) {
    out += c.name;
    out += c.kind == ClockKind::Physical ? " physical\n" : " discrete\n";
  }
  out += "variables ";
  out += std::to_string(b.variables.size());
  out += '\n';
  for (const auto& v : b.variables) {
    out += v.name;
    out += ' ';
    out += v.clock;
    switch (v.shape) {
      case ValueShape::Scalar: out += " scalar\n"; break;
      case ValueShape::Vector:
        out += " vector ";
        out += std::to_string(v.dim);
        out += '\n';
        break;
      case ValueShape::TrajectoryShape: out += " trajectory\n"; break;
    }
  }
  for (std::size_t ci = 0; ci < b.clocks.size(); ++ci) {
    const auto& trace = b.traces[ci];
    out += "ticks ";
    out += b.clocks[ci].name;
    out += ' ';
    out += std::to_string(trace.valuations.size());
    out += '\n';
    for (std::size_t t = 0; t < trace.valuations.size(); ++t) {
      out += std::to_string(t);
      for (const auto& val : trace.valuations[t]) put_value(out, val);
      out += '\n';
    }
  }
  out += "syncs ";
  out += std::to_string(b.syncs.size());
  out += '\n';
  for (const auto& s : b.syncs) {
    out += "sync ";
    out += s.source;
    out += ' ';
    out += s.target;
    out += ' ';
    out += std::to_string(s.samples.size());
    for (std::int64_t v : s.samples) {
      out += ' ';
      out += std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

SystemBehavior decode_trace(const std::string& text) {
  Tokens tk(text);
  tk.expect("mcltrace");
  if (tk.next_i64() != 1) throw std::runtime_error("trace: bad version");
  SystemBehavior b;
  tk.expect("grid_step");
  b.grid_step = tk.next_double();
  tk.expect("clocks");
  const auto nclocks = tk.next_i64();
  for (std::int64_t i = 0; i < nclocks; ++i) {
    ClockDecl c;
    c.name = tk.next();
    const std::string kind = tk.next();
    c.kind = kind == "physical" ? ClockKind::Physical : ClockKind::Discrete;
    b.clocks.push_back(std::move(c));
  }
  tk.expect("variables");
  const auto nvars = tk.next_i64();
  for (std::int64_t i = 0; i < nvars; ++i) {
    VariableDecl v;
    v.name = tk.next();
    v.clock = tk.next();
    const std::string shape = tk.next();
    if (shape == "scalar") {
      v.shape = ValueShape::Scalar;
    } else if (shape == "vector") {
      v.shape = ValueShape::Vector;
      v.dim = static_cast<int>(tk.next_i64());
    } else if (shape == "trajectory") {
      v.shape = ValueShape::TrajectoryShape;
    } else {
      throw std::runtime_error("trace: bad shape '" + shape + "'");
    }
    b.variables.push_back(std::move(v));
  }
  for (std::int64_t ci = 0; ci < nclocks; ++ci) {
    tk.expect("ticks");
    ClockTrace trace;
    trace.clock = tk.next();
    if (trace.clock != b.clocks[static_cast<std::size_t>(ci)].name)
      throw std::runtime_error("trace: tick section out of order");
    std::size_t nv = 0;
    for (const auto& v : b.variables)
      if (v.clock == trace.clock) ++nv;
    const auto nticks = tk.next_i64();
    trace.valuations.resize(static_cast<std::size_t>(nticks));
    for (std::int64_t t = 0; t < nticks; ++t) {
      if (tk.next_i64() != t)
        throw std::runtime_error("trace: non-dense tick index");
      auto& row = trace.valuations[static_cast<std::size_t>(t)];
      row.reserve(nv);
      for (std::size_t v = 0; v < nv; ++v) row.push_back(get_value(tk));
    }
    b.traces.push_back(std::move(trace));
  }
  tk.expect("syncs");
  const auto nsyncs = tk.next_i64();
  for (std::int64_t i = 0; i < nsyncs; ++i) {
    tk.expect("sync");
    SyncMap s;
    s.source = tk.next();
    s.target = tk.next();
    const auto n = tk.next_i64();
    s.samples.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) s.samples.push_back(tk.next_i64());
    b.syncs.push_back(std::move(s));
  }
  b.validate();
  return b;
}

}  // namespace mcl
