#pragma once

// Stability of inference: after adding a sample, an old member-access probe
// can be rewritten mechanically so that it still yields the same values.

#include <deque>
#include <string>
#include <vector>

#include "structprov/access.hpp"
#include "structprov/harness/random_data.hpp"
#include "structprov/inference.hpp"

namespace structprov::harness {

using foo::FooType;

enum class RewriteKind { WrapOptionMatch, ProjectAnyLabel, CoerceIntOfFloat };

struct StabilityRewrite {
  RewriteKind kind;
  std::string label;  // ProjectAnyLabel: the member taken
  bool lifted = false;  // applied under Some(...)

  std::string text() const {
    std::string out;
    switch (kind) {
      case RewriteKind::WrapOptionMatch: out = "unwrap"; break;
      case RewriteKind::ProjectAnyLabel: out = "." + label; break;
      case RewriteKind::CoerceIntOfFloat: out = "int"; break;
    }
    return lifted ? "lift(" + out + ")" : out;
  }
};

inline constexpr int kRewriteDepth = 4;

/// Same type up to class names.
inline bool types_compatible(const FooType& a, const FooType& b) {
  using K = FooType::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::List:
    case K::Option: return types_compatible(a.arg(), b.arg());
    case K::Arrow: return types_compatible(a.arg(), b.arg()) && types_compatible(a.result(), b.result());
    default: return true;
  }
}

/// Same value up to class names.
inline bool values_equivalent(const foo::ExprPtr& a, const foo::ExprPtr& b) {
  namespace F = foo;
  if (auto x = F::as<F::Expr::DataLit>(a)) {
    auto y = F::as<F::Expr::DataLit>(b);
    return y && data_equal(x->value, y->value);
  }
  if (F::as<F::Expr::NoneLit>(a)) return F::as<F::Expr::NoneLit>(b) != nullptr;
  if (F::as<F::Expr::NilLit>(a)) return F::as<F::Expr::NilLit>(b) != nullptr;
  if (auto x = F::as<F::Expr::SomeOf>(a)) {
    auto y = F::as<F::Expr::SomeOf>(b);
    return y && values_equivalent(x->value, y->value);
  }
  if (auto x = F::as<F::Expr::Cons>(a)) {
    auto y = F::as<F::Expr::Cons>(b);
    return y && values_equivalent(x->head, y->head) && values_equivalent(x->tail, y->tail);
  }
  if (auto x = F::as<F::Expr::New>(a)) {
    auto y = F::as<F::Expr::New>(b);
    if (!y || x->args.size() != y->args.size()) return false;
    for (std::size_t i = 0; i < x->args.size(); ++i)
      if (!values_equivalent(x->args[i], y->args[i])) return false;
    return true;
  }
  return false;
}

struct StabilityResult {
  std::vector<std::string> probe;
  std::vector<StabilityRewrite> rewrites;
  foo::ExprPtr rewritten;  // over the free variable `src`
  std::size_t inputs_compared = 0;
};

namespace detail {

inline const std::string kSource = "src";

struct Candidate {
  foo::ExprPtr expr;
  FooType type;
  std::vector<StabilityRewrite> rewrites;
};

class RewriteSearch {
 public:
  explicit RewriteSearch(const Provided& p) : p_(p) {}

  /// One rewrite applied to (e : t), possibly under an option.
  std::vector<Candidate> expand(const Candidate& c) {
    std::vector<Candidate> out;
    const FooType& t = c.type;
    auto with = [&](foo::ExprPtr e, FooType ty, StabilityRewrite r) {
      Candidate n{std::move(e), std::move(ty), c.rewrites};
      n.rewrites.push_back(std::move(r));
      out.push_back(std::move(n));
    };
    if (t.is(FooType::Kind::Option)) {
      std::string y = fresh();
      with(foo::match_option(c.expr, y, foo::var(y), foo::exn(t.arg())), t.arg(), {RewriteKind::WrapOptionMatch, {}});
      Candidate inner{foo::var(y), t.arg(), {}};
      for (Candidate& i : expand(inner)) {
        StabilityRewrite r = i.rewrites.back();
        r.lifted = true;
        with(foo::match_option(c.expr, y, foo::some(i.expr), foo::none(i.type)), FooType::option(i.type), r);
      }
    } else if (t.is(FooType::Kind::Class)) {
      const foo::ClassDef* cls = p_.classes.find(t.class_name());
      if (cls && cls->origin.rfind("any<", 0) == 0) {
        for (const foo::MemberDef* m : visible_members(*cls))
          with(foo::member(c.expr, m->name), m->type, {RewriteKind::ProjectAnyLabel, m->name});
      }
    } else if (t.is(FooType::Kind::Float)) {
      with(foo::int_coerce(c.expr), FooType::integer(), {RewriteKind::CoerceIntOfFloat, {}});
    }
    return out;
  }

  /// Everything reachable from `start` in at most kRewriteDepth rewrites,
  /// shortest first.
  std::vector<Candidate> closure(const Candidate& start) {
    std::vector<Candidate> out;
    std::deque<std::pair<Candidate, int>> q{{start, 0}};
    while (!q.empty() && out.size() < 256) {
      auto [c, d] = q.front();
      q.pop_front();
      out.push_back(c);
      if (d == kRewriteDepth) continue;
      for (Candidate& n : expand(c)) q.push_back({std::move(n), d + 1});
    }
    return out;
  }

 private:
  std::string fresh() { return "y" + std::to_string(counter_++); }
  const Provided& p_;
  std::size_t counter_ = 0;
};

inline foo::ExprPtr probe_expr(const foo::ExprPtr& base, const std::vector<std::string>& probe) {
  foo::ExprPtr e = base;
  for (const auto& m : probe) e = foo::member(e, m);
  return e;
}

}  // namespace detail

/// Type of `probe` over the provided root type, or nullopt when a step is
/// not a member of a class.
inline std::optional<FooType> probe_type(const Provided& p, const std::vector<std::string>& probe) {
  FooType t = p.root_type;
  for (const auto& m : probe) {
    if (!t.is(FooType::Kind::Class)) return std::nullopt;
    const foo::ClassDef* c = p.classes.find(t.class_name());
    const foo::MemberDef* md = c ? c->member(m) : nullptr;
    if (md == nullptr) return std::nullopt;
    t = md->type;
  }
  return t;
}

/// Member paths through class-typed members, up to `max_len` steps. Raw
/// and members of opaque class type are skipped: their only observation is
/// the raw data.
inline std::vector<std::vector<std::string>> enumerate_probes(const Provided& p, std::size_t max_len = 4) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  std::function<void(const FooType&)> go = [&](const FooType& t) {
    if (!t.is(FooType::Kind::Class) || cur.size() >= max_len) return;
    const foo::ClassDef* c = p.classes.find(t.class_name());
    if (c == nullptr) return;
    for (const foo::MemberDef* m : visible_members(*c)) {
      if (m->type.is(FooType::Kind::Class)) {
        const foo::ClassDef* mc = p.classes.find(m->type.class_name());
        if (mc && visible_members(*mc).empty()) continue;
      }
      cur.push_back(m->name);
      out.push_back(cur);
      go(m->type);
      cur.pop_back();
    }
  };
  go(p.root_type);
  return out;
}

/// Re-infers with `new_sample` appended and searches for a rewrite of
/// `probe` that gives, on every input where the old probe produced a
/// value, that same value. Throws RewriteNotFound.
inline StabilityResult check_stability(const std::vector<DataValue>& samples, const DataValue& new_sample,
                                       const std::vector<std::string>& probe, const std::vector<DataValue>& inputs,
                                       const InferenceConfig& cfg = {}, std::size_t fuel = foo::kDefaultFuel) {
  Provided old_p = provide_normalized(infer_many(samples, cfg));
  std::vector<DataValue> extended = samples;
  extended.push_back(new_sample);
  Provided new_p = provide_normalized(infer_many(extended, cfg));

  std::optional<FooType> old_t = probe_type(old_p, probe);
  if (!old_t) throw std::invalid_argument("probe is not a member path of the old provided type");

  std::vector<std::pair<DataValue, foo::ExprPtr>> expected;
  for (const auto& d : inputs) {
    foo::ExprPtr e = detail::probe_expr(foo::apply(old_p.converter, foo::data(d)), probe);
    foo::EvalOutcome o = foo::evaluate(old_p.classes, e, fuel);
    if (o.is_value()) expected.push_back({d, o.value});
  }

  detail::RewriteSearch search(new_p);
  StabilityResult result;
  result.probe = probe;
  result.inputs_compared = expected.size();

  auto matches = [&](const detail::Candidate& c) {
    if (!types_compatible(c.type, *old_t)) return false;
    for (const auto& [d, v] : expected) {
      foo::ExprPtr e = foo::subst(c.expr, detail::kSource, foo::apply(new_p.converter, foo::data(d)));
      foo::EvalOutcome o = foo::evaluate(new_p.classes, e, fuel);
      if (!o.is_value() || !values_equivalent(o.value, v)) return false;
    }
    return true;
  };

  std::function<bool(const detail::Candidate&, std::size_t)> walk = [&](const detail::Candidate& c, std::size_t step) {
    for (const detail::Candidate& r : search.closure(c)) {
      if (step == probe.size()) {
        if (matches(r)) {
          result.rewrites = r.rewrites;
          result.rewritten = r.expr;
          return true;
        }
        continue;
      }
      if (!r.type.is(FooType::Kind::Class)) continue;
      const foo::ClassDef* cls = new_p.classes.find(r.type.class_name());
      const foo::MemberDef* m = cls ? cls->member(probe[step]) : nullptr;
      if (m == nullptr) continue;
      if (walk({foo::member(r.expr, probe[step]), m->type, r.rewrites}, step + 1)) return true;
    }
    return false;
  };

  if (!walk({foo::var(detail::kSource), new_p.root_type, {}}, 0)) {
    std::string p;
    for (const auto& m : probe) p += "." + m;
    throw RewriteNotFound("no rewrite of probe " + p + " within depth " + std::to_string(kRewriteDepth) +
                          " reproduces its values after adding " + canonical_text(new_sample));
  }
  return result;
}

/// A sample that generalizes `d`: at a random field path outside lists,
/// drops the field, nulls it, turns an int into a float, or replaces the
/// value with a string, bool or record.
inline DataValue generalize_sample(const DataValue& d, Rng& rng) {
  std::vector<std::vector<std::string>> paths;
  std::vector<std::string> cur;
  std::function<void(const DataValue&)> go = [&](const DataValue& v) {
    if (!v.is_record()) return;
    for (const auto& [n, f] : v.fields()) {
      cur.push_back(n);
      paths.push_back(cur);
      go(f);
      cur.pop_back();
    }
  };
  go(d);
  if (paths.empty()) return DataValue::record(d.is_record() ? d.record_name() : kBullet, {{"extra", DataValue::integer(1)}});
  const auto& path = paths[pick(rng, paths.size())];
  std::function<DataValue(const DataValue&, std::size_t)> rebuild = [&](const DataValue& v, std::size_t k) -> DataValue {
    auto fields = v.fields();
    if (k + 1 == path.size()) {
      auto it = std::find_if(fields.begin(), fields.end(), [&](auto& f) { return f.first == path[k]; });
      switch (pick(rng, 5)) {
        case 0: fields.erase(it); break;
        case 1: it->second = DataValue::null(); break;
        case 2:
          it->second = it->second.is_int() ? DataValue::floating(static_cast<double>(it->second.as_int()) + 0.5)
                                           : DataValue::string("s");
          break;
        case 3: it->second = DataValue::string("s"); break;
        default: it->second = chance(rng, 0.5) ? DataValue::boolean(true) : DataValue::record(kBullet, {{"z", DataValue::integer(2)}});
      }
    } else {
      for (auto& [n, f] : fields)
        if (n == path[k]) f = rebuild(f, k + 1);
    }
    return DataValue::record(v.record_name(), std::move(fields));
  };
  return rebuild(d, 0);
}

}  // namespace structprov::harness
