#pragma once

// Bidirectional type checking for Foo.

#include <map>
#include <string>

#include "structprov/foo.hpp"

namespace structprov::foo {

struct TypecheckOptions {
  // Accept exn and int(e).
  bool allow_extensions = true;
};

using TypeEnv = std::map<std::string, FooType>;

class TypeChecker {
 public:
  TypeChecker(const ClassSet& classes, TypecheckOptions opts = {}) : classes_(classes), opts_(opts) {}

  FooType synth(const TypeEnv& env, const ExprPtr& e) const;
  void check(const TypeEnv& env, const ExprPtr& e, const FooType& expected) const;

 private:
  [[noreturn]] static void fail(const ExprPtr& e, const std::string& msg) {
    std::string where = to_string(e);
    if (where.size() > 120) where = where.substr(0, 117) + "...";
    throw TypeError(msg + " in `" + where + "`");
  }
  static std::optional<FooType> primitive_type(const DataValue& d) {
    if (d.is_int()) return FooType::integer();
    if (d.is_float()) return FooType::floating();
    if (d.is_string()) return FooType::text();
    if (d.is_bool()) return FooType::boolean();
    return std::nullopt;
  }
  FooType dyn_op(const TypeEnv& env, const ExprPtr& e, const Expr::DynOp& o) const;
  FooType continuation_result(const TypeEnv& env, const ExprPtr& k) const {
    FooType t = synth(env, k);
    if (!t.is(FooType::Kind::Arrow) || !t.arg().is(FooType::Kind::Data))
      fail(k, "continuation must have type Data -> t, found " + to_string(t));
    return t.result();
  }

  const ClassSet& classes_;
  TypecheckOptions opts_;
};

inline FooType TypeChecker::dyn_op(const TypeEnv& env, const ExprPtr& e, const Expr::DynOp& o) const {
  auto arity = [&](std::size_t n) {
    if (o.args.size() != n) fail(e, std::string(op_name(o.kind)) + " expects " + std::to_string(n) + " arguments");
  };
  switch (o.kind) {
    case OpKind::HasShape:
      arity(1);
      if (!o.shape) fail(e, "hasShape needs a shape");
      check(env, o.args[0], FooType::data());
      return FooType::boolean();
    case OpKind::ConvFloat:
      arity(1);
      if (!o.shape || !(o.shape->is(ShapeKind::Float) || o.shape->is(ShapeKind::Int)))
        fail(e, "convFloat takes the float or int shape");
      check(env, o.args[0], FooType::data());
      return FooType::floating();
    case OpKind::ConvPrim: {
      arity(1);
      if (!o.shape) fail(e, "convPrim needs a shape");
      check(env, o.args[0], FooType::data());
      switch (o.shape->kind()) {
        case ShapeKind::Int: return FooType::integer();
        case ShapeKind::Text: return FooType::text();
        case ShapeKind::Bool:
        case ShapeKind::Bit: return FooType::boolean();
        default: fail(e, "convPrim takes int, string, bool or bit");
      }
    }
    case OpKind::ConvField:
      arity(2);
      check(env, o.args[0], FooType::data());
      return continuation_result(env, o.args[1]);
    case OpKind::ConvNull:
      arity(2);
      check(env, o.args[0], FooType::data());
      return FooType::option(continuation_result(env, o.args[1]));
    case OpKind::ConvElements:
      arity(2);
      check(env, o.args[0], FooType::data());
      return FooType::list(continuation_result(env, o.args[1]));
  }
  fail(e, "unknown operation");
}

inline FooType TypeChecker::synth(const TypeEnv& env, const ExprPtr& e) const {
  using K = FooType::Kind;
  return std::visit(
      Overloaded{
          [&](const Expr::DataLit& d) { return primitive_type(d.value).value_or(FooType::data()); },
          [&](const Expr::Var& v) {
            auto it = env.find(v.name);
            if (it == env.end()) fail(e, "unbound variable '" + v.name + "'");
            return it->second;
          },
          [&](const Expr::Lambda& l) {
            TypeEnv inner = env;
            inner.insert_or_assign(l.param, l.param_type);
            return FooType::arrow(l.param_type, synth(inner, l.body));
          },
          [&](const Expr::Apply& a) {
            FooType f = synth(env, a.fn);
            if (!f.is(K::Arrow)) fail(e, "applying a non-function of type " + to_string(f));
            check(env, a.arg, f.arg());
            return f.result();
          },
          [&](const Expr::MemberAccess& m) {
            FooType o = synth(env, m.object);
            if (!o.is(K::Class)) fail(e, "member access on non-object type " + to_string(o));
            const ClassDef* c = classes_.find(o.class_name());
            if (c == nullptr) fail(e, "unknown class '" + o.class_name() + "'");
            const MemberDef* md = c->member(m.member);
            if (md == nullptr) fail(e, "class " + c->name + " has no member '" + m.member + "'");
            return md->type;
          },
          [&](const Expr::New& n) {
            const ClassDef* c = classes_.find(n.cls);
            if (c == nullptr) fail(e, "unknown class '" + n.cls + "'");
            if (c->params.size() != n.args.size()) fail(e, "wrong number of constructor arguments");
            for (std::size_t i = 0; i < n.args.size(); ++i) check(env, n.args[i], c->params[i].second);
            return FooType::cls(n.cls);
          },
          [&](const Expr::NoneLit& n) { return FooType::option(n.elem); },
          [&](const Expr::SomeOf& s) { return FooType::option(synth(env, s.value)); },
          [&](const Expr::MatchOption& m) {
            FooType s = synth(env, m.scrutinee);
            if (!s.is(K::Option)) fail(e, "match on non-option type " + to_string(s));
            TypeEnv inner = env;
            inner.insert_or_assign(m.var, s.arg());
            FooType t = synth(inner, m.some_branch);
            check(env, m.none_branch, t);
            return t;
          },
          [&](const Expr::Eq& q) {
            FooType t = FooType::data();
            try {
              t = synth(env, q.lhs);
              check(env, q.rhs, t);
            } catch (const TypeError&) {
              t = synth(env, q.rhs);
              check(env, q.lhs, t);
            }
            if (!is_comparable(t)) fail(e, "values of type " + to_string(t) + " cannot be compared");
            return FooType::boolean();
          },
          [&](const Expr::If& i) {
            check(env, i.cond, FooType::boolean());
            FooType t = synth(env, i.then_branch);
            check(env, i.else_branch, t);
            return t;
          },
          [&](const Expr::NilLit& n) { return FooType::list(n.elem); },
          [&](const Expr::Cons& c) {
            FooType t = synth(env, c.tail);
            if (!t.is(K::List)) fail(e, "tail of :: has non-list type " + to_string(t));
            check(env, c.head, t.arg());
            return t;
          },
          [&](const Expr::MatchList& m) {
            FooType s = synth(env, m.scrutinee);
            if (!s.is(K::List)) fail(e, "list match on non-list type " + to_string(s));
            TypeEnv inner = env;
            inner.insert_or_assign(m.head_var, s.arg());
            inner.insert_or_assign(m.tail_var, s);
            FooType t = synth(inner, m.cons_branch);
            check(env, m.nil_branch, t);
            return t;
          },
          [&](const Expr::DynOp& o) { return dyn_op(env, e, o); },
          [&](const Expr::ExnLit& x) {
            if (!opts_.allow_extensions) fail(e, "exn is not available");
            return x.type;
          },
          [&](const Expr::IntCoerce& i) {
            if (!opts_.allow_extensions) fail(e, "int(...) is not available");
            check(env, i.value, FooType::floating());
            return FooType::integer();
          },
      },
      e->node);
}

inline void TypeChecker::check(const TypeEnv& env, const ExprPtr& e, const FooType& expected) const {
  using K = FooType::Kind;
  if (auto d = as<Expr::DataLit>(e)) {
    // A literal is both Data and its primitive type.
    if (expected.is(K::Data)) return;
    auto p = primitive_type(d->value);
    if (p && *p == expected) return;
    fail(e, "data literal does not have type " + to_string(expected));
  }
  if (auto s = as<Expr::SomeOf>(e); s && expected.is(K::Option)) return check(env, s->value, expected.arg());
  if (auto c = as<Expr::Cons>(e); c && expected.is(K::List)) {
    check(env, c->head, expected.arg());
    return check(env, c->tail, expected);
  }
  if (auto x = as<Expr::ExnLit>(e)) {
    if (!opts_.allow_extensions) fail(e, "exn is not available");
    if (x->type != expected) fail(e, "exn annotated " + to_string(x->type) + " used at " + to_string(expected));
    return;
  }
  if (auto m = as<Expr::MatchOption>(e)) {
    FooType s = synth(env, m->scrutinee);
    if (!s.is(K::Option)) fail(e, "match on non-option type " + to_string(s));
    TypeEnv inner = env;
    inner.insert_or_assign(m->var, s.arg());
    check(inner, m->some_branch, expected);
    return check(env, m->none_branch, expected);
  }
  if (auto m = as<Expr::MatchList>(e)) {
    FooType s = synth(env, m->scrutinee);
    if (!s.is(K::List)) fail(e, "list match on non-list type " + to_string(s));
    TypeEnv inner = env;
    inner.insert_or_assign(m->head_var, s.arg());
    inner.insert_or_assign(m->tail_var, s);
    check(inner, m->cons_branch, expected);
    return check(env, m->nil_branch, expected);
  }
  if (auto i = as<Expr::If>(e)) {
    check(env, i->cond, FooType::boolean());
    check(env, i->then_branch, expected);
    return check(env, i->else_branch, expected);
  }
  if (auto l = as<Expr::Lambda>(e); l && expected.is(K::Arrow)) {
    if (l->param_type != expected.arg()) fail(e, "parameter type mismatch");
    TypeEnv inner = env;
    inner.insert_or_assign(l->param, l->param_type);
    return check(inner, l->body, expected.result());
  }
  FooType actual = synth(env, e);
  if (actual != expected) fail(e, "expected " + to_string(expected) + ", found " + to_string(actual));
}

inline FooType typecheck(const ClassSet& classes, const TypeEnv& env, const ExprPtr& e, TypecheckOptions opts = {}) {
  return TypeChecker(classes, opts).synth(env, e);
}

inline void typecheck_against(const ClassSet& classes, const TypeEnv& env, const ExprPtr& e, const FooType& t,
                              TypecheckOptions opts = {}) {
  TypeChecker(classes, opts).check(env, e, t);
}

/// Checks every member body of every class against its declared type.
inline void typecheck_classes(const ClassSet& classes, TypecheckOptions opts = {}) {
  TypeChecker tc(classes, opts);
  for (const auto& c : classes.all()) {
    TypeEnv env;
    for (const auto& [x, t] : c.params) env.insert_or_assign(x, t);
    for (const auto& m : c.members) {
      try {
        tc.check(env, m.body, m.type);
      } catch (const TypeError& err) {
        throw TypeError("member " + c.name + "." + m.name + ": " + err.what());
      }
    }
  }
}

}  // namespace structprov::foo
