#pragma once

// Small-step evaluation of Foo, including the dynamic data operations.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "structprov/foo.hpp"
#include "structprov/foo_typecheck.hpp"
#include "structprov/lexical.hpp"
#include "structprov/preferred.hpp"

namespace structprov {

/// Runtime shape test used by labelled tops and heterogeneous collections.
inline bool has_shape(const Shape& s, const DataValue& d) {
  switch (s.kind()) {
    case ShapeKind::Any: return true;
    case ShapeKind::Bot: return false;
    case ShapeKind::Null: return d.is_null();
    case ShapeKind::Nullable: return d.is_null() || has_shape(s.inner(), d);
    case ShapeKind::Text: return d.is_string();
    case ShapeKind::Int:
      return d.is_int() || (d.is_string() && lexical::parse_int(d.as_string()).has_value());
    case ShapeKind::Float:
      return d.is_int() || d.is_float() ||
             (d.is_string() && (lexical::parse_int(d.as_string()) || lexical::parse_float(d.as_string())));
    case ShapeKind::Bool:
    case ShapeKind::Bit:
      return d.is_bool() || (d.is_int() && (d.as_int() == 0 || d.as_int() == 1)) ||
             (d.is_string() && lexical::parse_bit_or_bool(d.as_string()).has_value());
    case ShapeKind::Record: {
      if (!d.is_record() || d.record_name() != s.record_name()) return false;
      for (const auto& f : s.fields()) {
        const DataValue* v = d.field(f.name);
        if (!has_shape(f.shape, v ? *v : DataValue::null())) return false;
      }
      return true;
    }
    case ShapeKind::Collection: {
      std::vector<std::size_t> counts(s.items().size(), 0);
      if (d.is_list()) {
        for (const auto& item : d.items()) {
          if (item.is_null()) continue;
          // Specific entries first; an any entry only takes what is left.
          bool matched = false;
          for (int pass = 0; pass < 2 && !matched; ++pass) {
            for (std::size_t i = 0; i < s.items().size(); ++i) {
              if (s.items()[i].shape.is(ShapeKind::Any) != (pass == 1)) continue;
              if (has_shape(s.items()[i].shape, item)) {
                ++counts[i];
                matched = true;
                break;
              }
            }
          }
          if (!matched) return false;
        }
      } else if (!d.is_null()) {
        return false;
      }
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (s.items()[i].multiplicity == Multiplicity::One && counts[i] == 0) return false;
      }
      return true;
    }
  }
  return false;
}

namespace foo {

struct StuckInfo {
  // Missing when the stuck term is not a data operation.
  std::optional<OpKind> op;
  std::optional<DataValue> data;
  std::string detail;
};

inline std::string describe(const StuckInfo& s) {
  std::string out = s.op ? std::string(op_name(*s.op)) : std::string("evaluation");
  out += " stuck";
  if (s.data) out += " on " + canonical_text(*s.data);
  if (!s.detail.empty()) out += ": " + s.detail;
  return out;
}

struct StepResult {
  enum class Kind { Stepped, Value, Stuck, Exn } kind;
  ExprPtr next;  // Stepped
  StuckInfo stuck;
};

namespace detail {

inline StepResult stepped(ExprPtr e) { return {StepResult::Kind::Stepped, std::move(e), {}}; }
inline StepResult stuck(std::optional<OpKind> op, std::optional<DataValue> d, std::string why) {
  return {StepResult::Kind::Stuck, nullptr, {op, std::move(d), std::move(why)}};
}

inline bool value_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (auto x = as<Expr::DataLit>(a)) return data_equal(x->value, as<Expr::DataLit>(b)->value);
  if (auto x = as<Expr::SomeOf>(a)) return value_equal(x->value, as<Expr::SomeOf>(b)->value);
  if (auto x = as<Expr::Cons>(a)) {
    auto y = as<Expr::Cons>(b);
    return value_equal(x->head, y->head) && value_equal(x->tail, y->tail);
  }
  if (auto x = as<Expr::New>(a)) {
    auto y = as<Expr::New>(b);
    if (x->cls != y->cls || x->args.size() != y->args.size()) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i)
      if (!value_equal(x->args[i], y->args[i])) return false;
    return true;
  }
  return as<Expr::NoneLit>(a) || as<Expr::NilLit>(a);
}

class Stepper {
 public:
  explicit Stepper(const ClassSet& classes) : classes_(classes) {}

  StepResult step(const ExprPtr& e) const {
    if (is_value(e)) return {StepResult::Kind::Value, e, {}};
    if (as<Expr::ExnLit>(e)) return {StepResult::Kind::Exn, e, {}};
    return std::visit([&](const auto& n) { return step_node(e, n); }, e->node);
  }

 private:
  // Steps `sub` in place if it is not yet a value. Returns nullopt when the
  // subterm is already a value.
  template <class Rebuild>
  std::optional<StepResult> inside(const ExprPtr& sub, Rebuild&& rebuild) const {
    if (is_value(sub)) return std::nullopt;
    StepResult r = step(sub);
    if (r.kind == StepResult::Kind::Stepped) r.next = rebuild(r.next);
    return r;
  }

  FooType continuation_type(const ExprPtr& k) const {
    FooType t = typecheck(classes_, {}, k);
    return t.is(FooType::Kind::Arrow) ? t.result() : FooType::data();
  }

  StepResult step_node(const ExprPtr&, const Expr::DataLit&) const { return stuck(std::nullopt, std::nullopt, "value"); }
  StepResult step_node(const ExprPtr&, const Expr::Var& v) const {
    return stuck(std::nullopt, std::nullopt, "free variable '" + v.name + "'");
  }
  StepResult step_node(const ExprPtr&, const Expr::Lambda&) const { return stuck(std::nullopt, std::nullopt, "value"); }
  StepResult step_node(const ExprPtr&, const Expr::NoneLit&) const { return stuck(std::nullopt, std::nullopt, "value"); }
  StepResult step_node(const ExprPtr&, const Expr::NilLit&) const { return stuck(std::nullopt, std::nullopt, "value"); }
  StepResult step_node(const ExprPtr& e, const Expr::ExnLit&) const { return {StepResult::Kind::Exn, e, {}}; }

  StepResult step_node(const ExprPtr&, const Expr::Apply& a) const {
    if (auto r = inside(a.fn, [&](ExprPtr f) { return apply(f, a.arg); })) return *r;
    if (auto r = inside(a.arg, [&](ExprPtr x) { return apply(a.fn, x); })) return *r;
    auto l = as<Expr::Lambda>(a.fn);
    if (!l) return stuck(std::nullopt, std::nullopt, "applying a non-function");
    return stepped(subst(l->body, l->param, a.arg));
  }

  StepResult step_node(const ExprPtr&, const Expr::MemberAccess& m) const {
    if (auto r = inside(m.object, [&](ExprPtr o) { return member(o, m.member); })) return *r;
    auto n = as<Expr::New>(m.object);
    if (!n) return stuck(std::nullopt, std::nullopt, "member '" + m.member + "' of a non-object");
    const ClassDef* c = classes_.find(n->cls);
    if (c == nullptr) return stuck(std::nullopt, std::nullopt, "unknown class '" + n->cls + "'");
    const MemberDef* md = c->member(m.member);
    if (md == nullptr || c->params.size() != n->args.size())
      return stuck(std::nullopt, std::nullopt, "class " + c->name + " has no member '" + m.member + "'");
    ExprPtr body = md->body;
    for (std::size_t i = 0; i < n->args.size(); ++i) body = subst(body, c->params[i].first, n->args[i]);
    return stepped(body);
  }

  StepResult step_node(const ExprPtr&, const Expr::New& n) const {
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      auto r = inside(n.args[i], [&](ExprPtr x) {
        auto args = n.args;
        args[i] = x;
        return make_new(n.cls, std::move(args));
      });
      if (r) return *r;
    }
    return stuck(std::nullopt, std::nullopt, "value");
  }

  StepResult step_node(const ExprPtr&, const Expr::SomeOf& s) const {
    if (auto r = inside(s.value, [&](ExprPtr x) { return some(x); })) return *r;
    return stuck(std::nullopt, std::nullopt, "value");
  }

  StepResult step_node(const ExprPtr&, const Expr::MatchOption& m) const {
    if (auto r = inside(m.scrutinee, [&](ExprPtr s) { return match_option(s, m.var, m.some_branch, m.none_branch); }))
      return *r;
    if (as<Expr::NoneLit>(m.scrutinee)) return stepped(m.none_branch);
    if (auto s = as<Expr::SomeOf>(m.scrutinee)) return stepped(subst(m.some_branch, m.var, s->value));
    return stuck(std::nullopt, std::nullopt, "match on a non-option");
  }

  StepResult step_node(const ExprPtr&, const Expr::Eq& q) const {
    if (auto r = inside(q.lhs, [&](ExprPtr x) { return eq(x, q.rhs); })) return *r;
    if (auto r = inside(q.rhs, [&](ExprPtr x) { return eq(q.lhs, x); })) return *r;
    if (as<Expr::Lambda>(q.lhs) || as<Expr::Lambda>(q.rhs))
      return stuck(std::nullopt, std::nullopt, "comparing functions");
    return stepped(data(DataValue::boolean(value_equal(q.lhs, q.rhs))));
  }

  StepResult step_node(const ExprPtr&, const Expr::If& i) const {
    if (auto r = inside(i.cond, [&](ExprPtr c) { return if_then_else(c, i.then_branch, i.else_branch); })) return *r;
    auto c = as<Expr::DataLit>(i.cond);
    if (!c || !c->value.is_bool()) return stuck(std::nullopt, std::nullopt, "condition is not a boolean");
    return stepped(c->value.as_bool() ? i.then_branch : i.else_branch);
  }

  StepResult step_node(const ExprPtr&, const Expr::Cons& c) const {
    if (auto r = inside(c.head, [&](ExprPtr h) { return cons(h, c.tail); })) return *r;
    if (auto r = inside(c.tail, [&](ExprPtr t) { return cons(c.head, t); })) return *r;
    return stuck(std::nullopt, std::nullopt, "value");
  }

  StepResult step_node(const ExprPtr&, const Expr::MatchList& m) const {
    if (auto r = inside(m.scrutinee, [&](ExprPtr s) {
          return match_list(s, m.head_var, m.tail_var, m.cons_branch, m.nil_branch);
        }))
      return *r;
    if (as<Expr::NilLit>(m.scrutinee)) return stepped(m.nil_branch);
    if (auto c = as<Expr::Cons>(m.scrutinee)) {
      ExprPtr body = m.cons_branch;
      // Substitute the tail first unless the head binder shadows it.
      if (m.tail_var != m.head_var) body = subst(body, m.tail_var, c->tail);
      return stepped(subst(body, m.head_var, c->head));
    }
    return stuck(std::nullopt, std::nullopt, "list match on a non-list");
  }

  StepResult step_node(const ExprPtr&, const Expr::IntCoerce& i) const {
    if (auto r = inside(i.value, [&](ExprPtr x) { return int_coerce(x); })) return *r;
    auto d = as<Expr::DataLit>(i.value);
    if (d && d->value.is_int()) return stepped(data(DataValue::integer(d->value.as_int())));
    if (d && d->value.is_float()) {
      double f = std::trunc(d->value.as_float());
      if (f >= -9.2e18 && f <= 9.2e18) return stepped(data(DataValue::integer(static_cast<std::int64_t>(f))));
    }
    return stuck(std::nullopt, d ? std::optional<DataValue>(d->value) : std::nullopt, "int() of a non-number");
  }

  StepResult step_node(const ExprPtr&, const Expr::DynOp& o) const {
    for (std::size_t i = 0; i < o.args.size(); ++i) {
      auto r = inside(o.args[i], [&](ExprPtr x) {
        Expr::DynOp copy = o;
        copy.args[i] = x;
        return make(std::move(copy));
      });
      if (r) return *r;
    }
    auto d0 = as<Expr::DataLit>(o.args.at(0));
    if (!d0) return stuck(o.kind, std::nullopt, "argument is not a data value");
    const DataValue& d = d0->value;
    switch (o.kind) {
      case OpKind::HasShape: return stepped(data(DataValue::boolean(has_shape(*o.shape, d))));
      case OpKind::ConvFloat: {
        if (d.is_float()) return stepped(data(d));
        if (d.is_int()) return stepped(data(DataValue::floating(static_cast<double>(d.as_int()))));
        if (d.is_string()) {
          if (auto f = lexical::parse_float(d.as_string())) return stepped(data(DataValue::floating(*f)));
        }
        return stuck(o.kind, d, "not a number");
      }
      case OpKind::ConvPrim: {
        switch (o.shape->kind()) {
          case ShapeKind::Int:
            if (d.is_int()) return stepped(data(DataValue::integer(d.as_int())));
            if (d.is_string()) {
              if (auto i = lexical::parse_int(d.as_string())) return stepped(data(DataValue::integer(*i)));
            }
            return stuck(o.kind, d, "not an int");
          case ShapeKind::Text:
            if (d.is_string()) return stepped(data(d));
            return stuck(o.kind, d, "not a string");
          case ShapeKind::Bool:
          case ShapeKind::Bit:
            if (d.is_bool()) return stepped(data(d));
            if (d.is_int() && (d.as_int() == 0 || d.as_int() == 1))
              return stepped(data(DataValue::boolean(d.as_int() == 1)));
            if (d.is_string()) {
              if (auto b = lexical::parse_bit_or_bool(d.as_string())) return stepped(data(DataValue::boolean(*b)));
            }
            return stuck(o.kind, d, "not a bool");
          default: return stuck(o.kind, d, "unsupported shape " + structprov::to_string(*o.shape));
        }
      }
      case OpKind::ConvField: {
        if (!d.is_record() || d.record_name() != o.record_name)
          return stuck(o.kind, d, "expected a record named " + o.record_name);
        const DataValue* f = d.field(o.field_name);
        return stepped(apply(o.args[1], data(f ? *f : DataValue::null())));
      }
      case OpKind::ConvNull:
        if (d.is_null()) return stepped(none(continuation_type(o.args[1])));
        return stepped(some(apply(o.args[1], o.args[0])));
      case OpKind::ConvElements: {
        ExprPtr out = nil(continuation_type(o.args[1]));
        if (d.is_null()) return stepped(out);
        if (!d.is_list()) return stuck(o.kind, d, "not a collection");
        const auto& items = d.items();
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
          if (it->is_null()) continue;
          if (o.shape && !has_shape(*o.shape, *it)) continue;
          out = cons(apply(o.args[1], data(*it)), out);
        }
        return stepped(out);
      }
    }
    return stuck(o.kind, d, "unknown operation");
  }

  const ClassSet& classes_;
};

}  // namespace detail

/// One reduction step.
inline StepResult reduce_step(const ClassSet& classes, const ExprPtr& e) { return detail::Stepper(classes).step(e); }

inline constexpr std::size_t kDefaultFuel = 1'000'000;

struct EvalOutcome {
  enum class Kind { Value, Stuck, Exn } kind;
  ExprPtr value;
  StuckInfo stuck;
  std::size_t steps = 0;

  bool is_value() const { return kind == Kind::Value; }
  bool is_stuck() const { return kind == Kind::Stuck; }
  bool is_exn() const { return kind == Kind::Exn; }
};

/// Reduces to a value, a stuck state or exn. Throws FuelExhausted.
inline EvalOutcome evaluate(const ClassSet& classes, const ExprPtr& e, std::size_t fuel = kDefaultFuel) {
  detail::Stepper stepper(classes);
  ExprPtr cur = e;
  for (std::size_t n = 0; n <= fuel; ++n) {
    StepResult r = stepper.step(cur);
    switch (r.kind) {
      case StepResult::Kind::Value: return {EvalOutcome::Kind::Value, cur, {}, n};
      case StepResult::Kind::Exn: return {EvalOutcome::Kind::Exn, nullptr, {}, n};
      case StepResult::Kind::Stuck: return {EvalOutcome::Kind::Stuck, cur, r.stuck, n};
      case StepResult::Kind::Stepped: cur = r.next; break;
    }
  }
  throw FuelExhausted(fuel);
}

/// Human-readable value: data in canonical form, None, Some(v), [v; ...],
/// objects as `new C(...)`.
inline std::string value_text(const ExprPtr& v) {
  if (auto d = as<Expr::DataLit>(v)) return canonical_text(d->value);
  if (as<Expr::NoneLit>(v)) return "None";
  if (auto s = as<Expr::SomeOf>(v)) return "Some(" + value_text(s->value) + ")";
  if (as<Expr::NilLit>(v) || as<Expr::Cons>(v)) {
    std::string out = "[";
    ExprPtr cur = v;
    bool first = true;
    while (auto c = as<Expr::Cons>(cur)) {
      out += (first ? "" : "; ") + value_text(c->head);
      first = false;
      cur = c->tail;
    }
    return out + "]";
  }
  if (auto n = as<Expr::New>(v)) return "<" + n->cls + ">";
  return to_string(v);
}

}  // namespace foo
}  // namespace structprov
