#include "mcl/formula.hpp"

#include <cstdio>
#include <cstdlib>

namespace mcl {

TermPtr Term::symbol(std::string n, std::int64_t off, TermPtr traj) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Symbol;
  t->name = std::move(n);
  t->offset = off;
  t->traj_time = std::move(traj);
  return t;
}

TermPtr Term::clock_pair(std::string mid, std::string target,
                         std::int64_t off) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::ClockPair;
  t->name = std::move(mid);
  t->pair_target = std::move(target);
  t->offset = off;
  return t;
}

TermPtr Term::constant(double v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Const;
  t->value = v;
  return t;
}

TermPtr Term::arith(Kind k, TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

LocalPtr LocalFormula::lit(bool v) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = v ? Kind::TrueLit : Kind::FalseLit;
  return f;
}

LocalPtr LocalFormula::atom(std::string pred, std::vector<TermPtr> args,
                            std::vector<TermPtr> params) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = Kind::Atom;
  f->pred = std::move(pred);
  f->args = std::move(args);
  f->params = std::move(params);
  return f;
}

LocalPtr LocalFormula::cmp(CmpOp op, TermPtr l, TermPtr r) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = Kind::Cmp;
  f->op = op;
  f->tl = std::move(l);
  f->tr = std::move(r);
  return f;
}

LocalPtr LocalFormula::negate(LocalPtr x) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = Kind::Not;
  f->a = std::move(x);
  return f;
}

LocalPtr LocalFormula::binary(Kind k, LocalPtr x, LocalPtr y) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = k;
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}

LocalPtr LocalFormula::ite(LocalPtr cond, LocalPtr then_f, LocalPtr else_f) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = Kind::IfThenElse;
  f->a = std::move(cond);
  f->b = std::move(then_f);
  f->c = std::move(else_f);
  return f;
}

LocalPtr LocalFormula::modal(Kind k, std::int64_t lo, std::int64_t hi,
                             bool unbounded, LocalPtr body) {
  auto f = std::make_shared<LocalFormula>();
  f->kind = k;
  f->lo = lo;
  f->hi = hi;
  f->unbounded = unbounded;
  f->a = std::move(body);
  return f;
}

GlobalPtr GlobalFormula::bind(std::string clock, LocalPtr body) {
  auto f = std::make_shared<GlobalFormula>();
  f->kind = Kind::Bind;
  f->clock = std::move(clock);
  f->body = std::move(body);
  return f;
}

GlobalPtr GlobalFormula::negate(GlobalPtr x) {
  auto f = std::make_shared<GlobalFormula>();
  f->kind = Kind::Not;
  f->a = std::move(x);
  return f;
}

GlobalPtr GlobalFormula::binary(Kind k, GlobalPtr x, GlobalPtr y) {
  auto f = std::make_shared<GlobalFormula>();
  f->kind = k;
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Symbol:
      return a->name == b->name && a->offset == b->offset &&
             structurally_equal(a->traj_time, b->traj_time);
    case Term::Kind::ClockPair:
      return a->name == b->name && a->pair_target == b->pair_target &&
             a->offset == b->offset;
    case Term::Kind::Const:
      return a->value == b->value;
    default:
      return structurally_equal(a->lhs, b->lhs) &&
             structurally_equal(a->rhs, b->rhs);
  }
}

bool structurally_equal(const LocalPtr& a, const LocalPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  using K = LocalFormula::Kind;
  switch (a->kind) {
    case K::TrueLit:
    case K::FalseLit:
      return true;
    case K::Atom: {
      if (a->pred != b->pred || a->args.size() != b->args.size() ||
          a->params.size() != b->params.size())
        return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!structurally_equal(a->args[i], b->args[i])) return false;
      for (std::size_t i = 0; i < a->params.size(); ++i)
        if (!structurally_equal(a->params[i], b->params[i])) return false;
      return true;
    }
    case K::Cmp:
      return a->op == b->op && structurally_equal(a->tl, b->tl) &&
             structurally_equal(a->tr, b->tr);
    case K::Eventually:
    case K::Globally:
      if (a->lo != b->lo || a->unbounded != b->unbounded ||
          (!a->unbounded && a->hi != b->hi))
        return false;
      return structurally_equal(a->a, b->a);
    default:
      return structurally_equal(a->a, b->a) &&
             structurally_equal(a->b, b->b) && structurally_equal(a->c, b->c);
  }
}

bool structurally_equal(const GlobalPtr& a, const GlobalPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (a->kind == GlobalFormula::Kind::Bind)
    return a->clock == b->clock && structurally_equal(a->body, b->body);
  return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Gt: return ">";
    default: return ">=";
  }
}

namespace {

// Shortest decimal that round-trips the double.
std::string print_number(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void print_term(std::string& out, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Symbol:
      out += t->name;
      if (t->offset != 0 || t->traj_time) {
        out += '(';
        out += std::to_string(t->offset);
        out += ')';
      }
      if (t->traj_time) {
        out += '(';
        print_term(out, t->traj_time);
        out += ')';
      }
      break;
    case Term::Kind::ClockPair:
      out += t->name;
      out += '^';
      out += t->pair_target;
      out += '(';
      out += std::to_string(t->offset);
      out += ')';
      break;
    case Term::Kind::Const:
      if (t->value < 0) {
        out += "(0 - ";
        out += print_number(-t->value);
        out += ')';
      } else {
        out += print_number(t->value);
      }
      break;
    case Term::Kind::Add:
    case Term::Kind::Sub:
    case Term::Kind::Mul:
      out += '(';
      print_term(out, t->lhs);
      out += t->kind == Term::Kind::Add ? " + "
             : t->kind == Term::Kind::Sub ? " - "
                                          : " * ";
      print_term(out, t->rhs);
      out += ')';
      break;
  }
}

void print_local(std::string& out, const LocalPtr& f) {
  using K = LocalFormula::Kind;
  switch (f->kind) {
    case K::TrueLit: out += "true"; break;
    case K::FalseLit: out += "false"; break;
    case K::Atom: {
      out += f->pred;
      out += '(';
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) out += ", ";
        print_term(out, f->args[i]);
      }
      out += ';';
      for (std::size_t i = 0; i < f->params.size(); ++i) {
        out += i ? ", " : " ";
        print_term(out, f->params[i]);
      }
      out += ')';
      break;
    }
    case K::Cmp:
      print_term(out, f->tl);
      out += ' ';
      out += to_string(f->op);
      out += ' ';
      print_term(out, f->tr);
      break;
    case K::Not:
      out += "!(";
      print_local(out, f->a);
      out += ')';
      break;
    case K::And:
    case K::Or:
    case K::Implies:
      out += '(';
      print_local(out, f->a);
      out += f->kind == K::And ? " && " : f->kind == K::Or ? " || " : " -> ";
      print_local(out, f->b);
      out += ')';
      break;
    case K::IfThenElse:
      out += "(if ";
      print_local(out, f->a);
      out += " then ";
      print_local(out, f->b);
      out += " else ";
      print_local(out, f->c);
      out += ')';
      break;
    case K::Eventually:
    case K::Globally:
      out += f->kind == K::Eventually ? 'F' : 'G';
      out += '[';
      out += std::to_string(f->lo);
      out += ',';
      out += f->unbounded ? "inf" : std::to_string(f->hi);
      out += "] (";
      print_local(out, f->a);
      out += ')';
      break;
  }
}

void print_global(std::string& out, const GlobalPtr& f, bool parens) {
  using K = GlobalFormula::Kind;
  switch (f->kind) {
    case K::Bind:
      if (parens) out += '(';
      out += '@';
      out += f->clock;
      out += ". ";
      print_local(out, f->body);
      if (parens) out += ')';
      break;
    case K::Not:
      out += '!';
      print_global(out, f->a, true);
      break;
    default:
      out += '(';
      print_global(out, f->a, true);
      out += f->kind == K::And ? " && " : f->kind == K::Or ? " || " : " -> ";
      print_global(out, f->b, true);
      out += ')';
      break;
  }
}

}  // namespace

std::string print(const TermPtr& t) {
  std::string out;
  print_term(out, t);
  return out;
}

std::string print(const LocalPtr& f) {
  std::string out;
  print_local(out, f);
  return out;
}

std::string print(const GlobalPtr& f) {
  std::string out;
  print_global(out, f, false);
  return out;
}

}  // namespace mcl
