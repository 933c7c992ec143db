#pragma once

// Random well-typed programs over provided classes, reduced one step at a
// time: every intermediate term must keep its type, and every run must end
// in a value or exn within the step budget.

#include <string>
#include <vector>

#include "structprov/access.hpp"
#include "structprov/foo_typecheck.hpp"
#include "structprov/harness/random_data.hpp"

namespace structprov::harness {

using foo::FooType;

/// Generates closed expressions of a requested type. Object-typed leaves
/// come from a pool of member-access chains over converted inputs.
class ExprGen {
 public:
  ExprGen(Rng& rng, const Provided& p) : rng_(rng), p_(p) {}

  /// Adds `conv d` and member-access chains below it to the pool.
  void add_source(const DataValue& d, int chain_depth = 3) {
    add_pool(foo::apply(p_.converter, foo::data(d)), p_.root_type, chain_depth);
  }

  /// Types worth asking for: primitives plus every pooled type.
  std::vector<FooType> known_types() const {
    std::vector<FooType> out = {FooType::integer(), FooType::floating(), FooType::boolean(), FooType::text()};
    for (const auto& [e, t] : pool_)
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return out;
  }

  FooType random_type() {
    auto ts = known_types();
    FooType t = ts[pick(rng_, ts.size())];
    if (chance(rng_, 0.1)) return FooType::option(t);
    if (chance(rng_, 0.1)) return FooType::list(t);
    return t;
  }

  foo::ExprPtr gen(const FooType& t, const foo::TypeEnv& env, int depth) {
    using K = FooType::Kind;
    if (depth > 0 && chance(rng_, 0.45)) {
      switch (pick(rng_, 4)) {
        case 0: return foo::if_then_else(gen(FooType::boolean(), env, depth - 1), gen(t, env, depth - 1), gen(t, env, depth - 1));
        case 1: {
          FooType inner = option_source_type();
          std::string y = fresh();
          foo::TypeEnv env2 = env;
          env2.insert_or_assign(y, inner.arg());
          return foo::match_option(ascribe(gen(inner, env, depth - 1), inner), y, gen(t, env2, depth - 1), gen(t, env, depth - 1));
        }
        case 2: {
          FooType lt = list_source_type();
          std::string h = fresh(), tl = fresh();
          foo::TypeEnv env2 = env;
          env2.insert_or_assign(h, lt.arg());
          env2.insert_or_assign(tl, lt);
          return foo::match_list(ascribe(gen(lt, env, depth - 1), lt), h, tl, gen(t, env2, depth - 1), gen(t, env, depth - 1));
        }
        default: {
          FooType a = random_type();
          std::string y = fresh();
          foo::TypeEnv env2 = env;
          env2.insert_or_assign(y, a);
          return foo::apply(foo::lambda(y, a, gen(t, env2, depth - 1)), gen(a, env, depth - 1));
        }
      }
    }
    std::vector<foo::ExprPtr> leaves;
    for (const auto& [x, xt] : env)
      if (xt == t) leaves.push_back(foo::var(x));
    for (const auto& [e, et] : pool_)
      if (et == t) leaves.push_back(e);
    if (!leaves.empty() && chance(rng_, 0.7)) return leaves[pick(rng_, leaves.size())];
    if (chance(rng_, 0.03)) return foo::exn(t);
    switch (t.kind()) {
      case K::Int:
        if (depth > 0 && chance(rng_, 0.2)) return foo::int_coerce(gen(FooType::floating(), env, depth - 1));
        return foo::data(DataValue::integer(std::uniform_int_distribution<int>(-3, 9)(rng_)));
      case K::Float: return foo::data(DataValue::floating(std::uniform_int_distribution<int>(-8, 40)(rng_) / 4.0));
      case K::Text: return foo::data(DataValue::string(chance(rng_, 0.5) ? "a" : "CZ"));
      case K::Bool:
        if (depth > 0 && chance(rng_, 0.5)) {
          FooType ct = comparable_type();
          return foo::eq(ascribe(gen(ct, env, depth - 1), ct), ascribe(gen(ct, env, depth - 1), ct));
        }
        return foo::data(DataValue::boolean(chance(rng_, 0.5)));
      case K::Option:
        if (chance(rng_, 0.5)) return foo::none(t.arg());
        return foo::some(gen(t.arg(), env, depth > 0 ? depth - 1 : 0));
      case K::List:
        if (depth <= 0 || chance(rng_, 0.4)) return foo::nil(t.arg());
        return foo::cons(gen(t.arg(), env, depth - 1), gen(t, env, depth - 1));
      default:
        if (!leaves.empty()) return leaves[pick(rng_, leaves.size())];
        return foo::exn(t);
    }
  }

  /// Synthesis positions get the intended type through `(fun v: t -> v) e`.
  foo::ExprPtr ascribe(foo::ExprPtr e, const FooType& t) {
    std::string v = fresh();
    return foo::apply(foo::lambda(v, t, foo::var(v)), std::move(e));
  }

 private:
  void add_pool(const foo::ExprPtr& e, const FooType& t, int depth) {
    if (t.is(FooType::Kind::Data) || t.is(FooType::Kind::Arrow)) return;
    pool_.push_back({e, t});
    if (depth <= 0 || !t.is(FooType::Kind::Class)) return;
    const foo::ClassDef* c = p_.classes.find(t.class_name());
    if (c == nullptr) return;
    for (const foo::MemberDef* m : visible_members(*c)) add_pool(foo::member(e, m->name), m->type, depth - 1);
  }

  FooType option_source_type() {
    std::vector<FooType> opts;
    for (const auto& [e, t] : pool_)
      if (t.is(FooType::Kind::Option)) opts.push_back(t);
    if (!opts.empty() && chance(rng_, 0.7)) return opts[pick(rng_, opts.size())];
    return FooType::option(random_type());
  }

  FooType list_source_type() {
    std::vector<FooType> ls;
    for (const auto& [e, t] : pool_)
      if (t.is(FooType::Kind::List)) ls.push_back(t);
    if (!ls.empty() && chance(rng_, 0.7)) return ls[pick(rng_, ls.size())];
    return FooType::list(random_type());
  }

  FooType comparable_type() {
    for (int i = 0; i < 8; ++i) {
      FooType t = random_type();
      if (foo::is_comparable(t)) return t;
    }
    return FooType::integer();
  }

  std::string fresh() { return "v" + std::to_string(counter_++); }

  Rng& rng_;
  const Provided& p_;
  std::vector<std::pair<foo::ExprPtr, FooType>> pool_;
  std::size_t counter_ = 0;
};

struct RunCheck {
  enum class Kind { Value, Exn, NotPreserved, Stuck, OutOfFuel } kind;
  std::size_t steps = 0;
  std::string detail;
  bool ok() const { return kind == Kind::Value || kind == Kind::Exn; }
};

/// Reduces `e` step by step, type-checking every intermediate term
/// against `t`.
inline RunCheck run_checked(const foo::ClassSet& classes, const foo::ExprPtr& e, const FooType& t, std::size_t fuel) {
  foo::detail::Stepper stepper(classes);
  foo::ExprPtr cur = e;
  for (std::size_t n = 0; n <= fuel; ++n) {
    try {
      foo::typecheck_against(classes, {}, cur, t);
    } catch (const TypeError& err) {
      return {RunCheck::Kind::NotPreserved, n, err.what()};
    }
    foo::StepResult r = stepper.step(cur);
    switch (r.kind) {
      case foo::StepResult::Kind::Value: return {RunCheck::Kind::Value, n, foo::value_text(cur)};
      case foo::StepResult::Kind::Exn: return {RunCheck::Kind::Exn, n, {}};
      case foo::StepResult::Kind::Stuck: return {RunCheck::Kind::Stuck, n, foo::describe(r.stuck)};
      case foo::StepResult::Kind::Stepped: cur = r.next; break;
    }
  }
  return {RunCheck::Kind::OutOfFuel, fuel, {}};
}

}  // namespace structprov::harness
