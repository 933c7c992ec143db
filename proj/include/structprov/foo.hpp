#pragma once

// Syntax of the Foo calculus: types, expressions, classes.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "structprov/data_value.hpp"
#include "structprov/error.hpp"
#include "structprov/shape.hpp"

namespace structprov::foo {

// ---------------------------------------------------------------------------
// Types

class FooType {
 public:
  enum class Kind { Int, Float, Bool, Text, Data, Class, Arrow, List, Option };

  static FooType integer() { return FooType(Kind::Int); }
  static FooType floating() { return FooType(Kind::Float); }
  static FooType boolean() { return FooType(Kind::Bool); }
  static FooType text() { return FooType(Kind::Text); }
  static FooType data() { return FooType(Kind::Data); }
  static FooType cls(std::string name) {
    FooType t(Kind::Class);
    t.name_ = std::move(name);
    return t;
  }
  static FooType arrow(FooType from, FooType to) {
    FooType t(Kind::Arrow);
    t.a_ = std::make_shared<const FooType>(std::move(from));
    t.b_ = std::make_shared<const FooType>(std::move(to));
    return t;
  }
  static FooType list(FooType elem) {
    FooType t(Kind::List);
    t.a_ = std::make_shared<const FooType>(std::move(elem));
    return t;
  }
  static FooType option(FooType elem) {
    FooType t(Kind::Option);
    t.a_ = std::make_shared<const FooType>(std::move(elem));
    return t;
  }

  Kind kind() const noexcept { return kind_; }
  bool is(Kind k) const noexcept { return kind_ == k; }
  const std::string& class_name() const { return name_; }
  /// Element of list/option, parameter of an arrow.
  const FooType& arg() const { return *a_; }
  /// Result of an arrow.
  const FooType& result() const { return *b_; }

  friend bool operator==(const FooType& x, const FooType& y) {
    if (x.kind_ != y.kind_) return false;
    switch (x.kind_) {
      case Kind::Class: return x.name_ == y.name_;
      case Kind::Arrow: return *x.a_ == *y.a_ && *x.b_ == *y.b_;
      case Kind::List:
      case Kind::Option: return *x.a_ == *y.a_;
      default: return true;
    }
  }
  friend bool operator!=(const FooType& x, const FooType& y) { return !(x == y); }

 private:
  explicit FooType(Kind k) : kind_(k) {}
  Kind kind_;
  std::string name_;
  std::shared_ptr<const FooType> a_, b_;
};

inline std::string to_string(const FooType& t) {
  using K = FooType::Kind;
  switch (t.kind()) {
    case K::Int: return "int";
    case K::Float: return "float";
    case K::Bool: return "bool";
    case K::Text: return "string";
    case K::Data: return "Data";
    case K::Class: return t.class_name();
    case K::Arrow: {
      std::string lhs = to_string(t.arg());
      if (t.arg().is(K::Arrow)) lhs = "(" + lhs + ")";
      return lhs + " -> " + to_string(t.result());
    }
    case K::List: return "list<" + to_string(t.arg()) + ">";
    case K::Option: return "option<" + to_string(t.arg()) + ">";
  }
  return "?";
}

/// True when values of the type can be compared with `=`.
inline bool is_comparable(const FooType& t) {
  switch (t.kind()) {
    case FooType::Kind::Arrow: return false;
    case FooType::Kind::List:
    case FooType::Kind::Option: return is_comparable(t.arg());
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// Expressions

enum class OpKind { ConvFloat, ConvPrim, ConvField, ConvNull, ConvElements, HasShape };

inline std::string_view op_name(OpKind k) {
  switch (k) {
    case OpKind::ConvFloat: return "convFloat";
    case OpKind::ConvPrim: return "convPrim";
    case OpKind::ConvField: return "convField";
    case OpKind::ConvNull: return "convNull";
    case OpKind::ConvElements: return "convElements";
    case OpKind::HasShape: return "hasShape";
  }
  return "?";
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct DataLit {
    DataValue value;
  };
  struct Var {
    std::string name;
  };
  struct Lambda {
    std::string param;
    FooType param_type;
    ExprPtr body;
  };
  struct Apply {
    ExprPtr fn, arg;
  };
  struct MemberAccess {
    ExprPtr object;
    std::string member;
  };
  struct New {
    std::string cls;
    std::vector<ExprPtr> args;
  };
  struct NoneLit {
    FooType elem;
  };
  struct SomeOf {
    ExprPtr value;
  };
  struct MatchOption {
    ExprPtr scrutinee;
    std::string var;
    ExprPtr some_branch, none_branch;
  };
  struct Eq {
    ExprPtr lhs, rhs;
  };
  struct If {
    ExprPtr cond, then_branch, else_branch;
  };
  struct NilLit {
    FooType elem;
  };
  struct Cons {
    ExprPtr head, tail;
  };
  struct MatchList {
    ExprPtr scrutinee;
    std::string head_var, tail_var;
    ExprPtr cons_branch, nil_branch;
  };
  // Dynamic data operation. Arguments by kind:
  //   convFloat(σ, e), convPrim(σ, e), hasShape(σ, e)      shape + args[0]
  //   convField(ν, ν', e, k)                              names + args[0..1]
  //   convNull(e, k)                                      args[0..1]
  //   convElements(e, k) with an optional element filter  shape? + args[0..1]
  struct DynOp {
    OpKind kind;
    std::optional<Shape> shape;
    std::string record_name, field_name;
    std::vector<ExprPtr> args;
  };
  // Runtime exception and float-to-int coercion, used by stability rewrites.
  struct ExnLit {
    FooType type;
  };
  struct IntCoerce {
    ExprPtr value;
  };

  using Variant = std::variant<DataLit, Var, Lambda, Apply, MemberAccess, New, NoneLit, SomeOf, MatchOption, Eq, If,
                               NilLit, Cons, MatchList, DynOp, ExnLit, IntCoerce>;
  Variant node;
};

template <class T>
const T* as(const ExprPtr& e) {
  return std::get_if<T>(&e->node);
}

inline ExprPtr make(Expr::Variant v) { return std::make_shared<const Expr>(Expr{std::move(v)}); }

inline ExprPtr data(DataValue d) { return make(Expr::DataLit{std::move(d)}); }
inline ExprPtr var(std::string x) { return make(Expr::Var{std::move(x)}); }
inline ExprPtr lambda(std::string x, FooType t, ExprPtr body) {
  return make(Expr::Lambda{std::move(x), std::move(t), std::move(body)});
}
inline ExprPtr apply(ExprPtr f, ExprPtr a) { return make(Expr::Apply{std::move(f), std::move(a)}); }
inline ExprPtr member(ExprPtr o, std::string n) { return make(Expr::MemberAccess{std::move(o), std::move(n)}); }
inline ExprPtr make_new(std::string cls, std::vector<ExprPtr> args) {
  return make(Expr::New{std::move(cls), std::move(args)});
}
inline ExprPtr none(FooType t) { return make(Expr::NoneLit{std::move(t)}); }
inline ExprPtr some(ExprPtr v) { return make(Expr::SomeOf{std::move(v)}); }
inline ExprPtr match_option(ExprPtr s, std::string x, ExprPtr some_branch, ExprPtr none_branch) {
  return make(Expr::MatchOption{std::move(s), std::move(x), std::move(some_branch), std::move(none_branch)});
}
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return make(Expr::Eq{std::move(a), std::move(b)}); }
inline ExprPtr if_then_else(ExprPtr c, ExprPtr t, ExprPtr e) {
  return make(Expr::If{std::move(c), std::move(t), std::move(e)});
}
inline ExprPtr nil(FooType t) { return make(Expr::NilLit{std::move(t)}); }
inline ExprPtr cons(ExprPtr h, ExprPtr t) { return make(Expr::Cons{std::move(h), std::move(t)}); }
inline ExprPtr match_list(ExprPtr s, std::string h, std::string t, ExprPtr cons_branch, ExprPtr nil_branch) {
  return make(Expr::MatchList{std::move(s), std::move(h), std::move(t), std::move(cons_branch), std::move(nil_branch)});
}
inline ExprPtr conv_float(Shape s, ExprPtr e) { return make(Expr::DynOp{OpKind::ConvFloat, std::move(s), {}, {}, {std::move(e)}}); }
inline ExprPtr conv_prim(Shape s, ExprPtr e) { return make(Expr::DynOp{OpKind::ConvPrim, std::move(s), {}, {}, {std::move(e)}}); }
inline ExprPtr has_shape_op(Shape s, ExprPtr e) {
  return make(Expr::DynOp{OpKind::HasShape, std::move(s), {}, {}, {std::move(e)}});
}
inline ExprPtr conv_field(std::string rec, std::string field, ExprPtr e, ExprPtr k) {
  return make(Expr::DynOp{OpKind::ConvField, std::nullopt, std::move(rec), std::move(field), {std::move(e), std::move(k)}});
}
inline ExprPtr conv_null(ExprPtr e, ExprPtr k) {
  return make(Expr::DynOp{OpKind::ConvNull, std::nullopt, {}, {}, {std::move(e), std::move(k)}});
}
inline ExprPtr conv_elements(ExprPtr e, ExprPtr k, std::optional<Shape> filter = std::nullopt) {
  return make(Expr::DynOp{OpKind::ConvElements, std::move(filter), {}, {}, {std::move(e), std::move(k)}});
}
inline ExprPtr exn(FooType t) { return make(Expr::ExnLit{std::move(t)}); }
inline ExprPtr int_coerce(ExprPtr e) { return make(Expr::IntCoerce{std::move(e)}); }

/// v = d | None | Some(v) | new C(v...) | nil | v :: v | λx.e
inline bool is_value(const ExprPtr& e) {
  return std::visit(Overloaded{
                        [](const Expr::DataLit&) { return true; },
                        [](const Expr::Lambda&) { return true; },
                        [](const Expr::NoneLit&) { return true; },
                        [](const Expr::NilLit&) { return true; },
                        [](const Expr::SomeOf& s) { return is_value(s.value); },
                        [](const Expr::Cons& c) { return is_value(c.head) && is_value(c.tail); },
                        [](const Expr::New& n) {
                          for (const auto& a : n.args)
                            if (!is_value(a)) return false;
                          return true;
                        },
                        [](const auto&) { return false; },
                    },
                    e->node);
}

// ---------------------------------------------------------------------------
// Classes

struct MemberDef {
  std::string name;
  FooType type;
  ExprPtr body;
};

struct ClassDef {
  std::string name;
  std::vector<std::pair<std::string, FooType>> params;
  std::vector<MemberDef> members;
  // Shape the class was generated from, rendered; empty for hand-written
  // classes. Lets tools relate classes of two provided type sets.
  std::string origin;

  const MemberDef* member(std::string_view n) const {
    for (const auto& m : members)
      if (m.name == n) return &m;
    return nullptr;
  }
};

/// Classes in definition order, addressable by name.
class ClassSet {
 public:
  void add(ClassDef c) {
    if (index_.count(c.name)) throw std::invalid_argument("duplicate class '" + c.name + "'");
    index_.emplace(c.name, classes_.size());
    classes_.push_back(std::move(c));
  }
  const ClassDef* find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &classes_[it->second];
  }
  ClassDef* find_mutable(std::string_view name) {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &classes_[it->second];
  }
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const std::vector<ClassDef>& all() const { return classes_; }
  std::vector<ClassDef>& all_mutable() { return classes_; }
  std::size_t size() const { return classes_.size(); }

 private:
  std::vector<ClassDef> classes_;
  std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Substitution. Values substituted during evaluation are closed, so there is
// no capture to avoid; binders only shadow.

inline ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  auto go = [&](const ExprPtr& c) { return subst(c, x, v); };
  return std::visit(
      Overloaded{
          [&](const Expr::Var& n) { return n.name == x ? v : e; },
          [&](const Expr::DataLit&) { return e; },
          [&](const Expr::NoneLit&) { return e; },
          [&](const Expr::NilLit&) { return e; },
          [&](const Expr::ExnLit&) { return e; },
          [&](const Expr::Lambda& l) { return l.param == x ? e : lambda(l.param, l.param_type, go(l.body)); },
          [&](const Expr::Apply& a) { return apply(go(a.fn), go(a.arg)); },
          [&](const Expr::MemberAccess& m) { return member(go(m.object), m.member); },
          [&](const Expr::New& n) {
            std::vector<ExprPtr> args;
            for (const auto& a : n.args) args.push_back(go(a));
            return make_new(n.cls, std::move(args));
          },
          [&](const Expr::SomeOf& s) { return some(go(s.value)); },
          [&](const Expr::MatchOption& m) {
            return match_option(go(m.scrutinee), m.var, m.var == x ? m.some_branch : go(m.some_branch), go(m.none_branch));
          },
          [&](const Expr::Eq& q) { return eq(go(q.lhs), go(q.rhs)); },
          [&](const Expr::If& i) { return if_then_else(go(i.cond), go(i.then_branch), go(i.else_branch)); },
          [&](const Expr::Cons& c) { return cons(go(c.head), go(c.tail)); },
          [&](const Expr::MatchList& m) {
            bool shadowed = m.head_var == x || m.tail_var == x;
            return match_list(go(m.scrutinee), m.head_var, m.tail_var, shadowed ? m.cons_branch : go(m.cons_branch),
                              go(m.nil_branch));
          },
          [&](const Expr::DynOp& o) {
            Expr::DynOp copy = o;
            for (auto& a : copy.args) a = go(a);
            return make(std::move(copy));
          },
          [&](const Expr::IntCoerce& i) { return int_coerce(go(i.value)); },
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Surface syntax

namespace detail {

inline void append_expr(std::string& out, const ExprPtr& e);

inline std::string expr_text(const ExprPtr& e) {
  std::string s;
  append_expr(s, e);
  return s;
}

inline bool is_atomic(const ExprPtr& e) {
  return std::holds_alternative<Expr::DataLit>(e->node) || std::holds_alternative<Expr::Var>(e->node) ||
         std::holds_alternative<Expr::NoneLit>(e->node) || std::holds_alternative<Expr::NilLit>(e->node) ||
         std::holds_alternative<Expr::SomeOf>(e->node) || std::holds_alternative<Expr::New>(e->node) ||
         std::holds_alternative<Expr::DynOp>(e->node) || std::holds_alternative<Expr::MemberAccess>(e->node) ||
         std::holds_alternative<Expr::ExnLit>(e->node) || std::holds_alternative<Expr::IntCoerce>(e->node);
}

inline std::string atom(const ExprPtr& e) { return is_atomic(e) ? expr_text(e) : "(" + expr_text(e) + ")"; }

inline void append_expr(std::string& out, const ExprPtr& e) {
  std::visit(Overloaded{
                 [&](const Expr::DataLit& d) { out += canonical_text(d.value); },
                 [&](const Expr::Var& v) { out += v.name; },
                 [&](const Expr::Lambda& l) {
                   out += "fun (" + l.param + " : " + to_string(l.param_type) + ") -> " + expr_text(l.body);
                 },
                 [&](const Expr::Apply& a) { out += atom(a.fn) + " " + atom(a.arg); },
                 [&](const Expr::MemberAccess& m) { out += atom(m.object) + "." + m.member; },
                 [&](const Expr::New& n) {
                   out += "new " + n.cls + "(";
                   for (std::size_t i = 0; i < n.args.size(); ++i) out += (i ? ", " : "") + expr_text(n.args[i]);
                   out += ")";
                 },
                 [&](const Expr::NoneLit&) { out += "None"; },
                 [&](const Expr::SomeOf& s) { out += "Some(" + expr_text(s.value) + ")"; },
                 [&](const Expr::MatchOption& m) {
                   out += "match " + expr_text(m.scrutinee) + " with Some(" + m.var + ") -> " + expr_text(m.some_branch) +
                          " | None -> " + expr_text(m.none_branch);
                 },
                 [&](const Expr::Eq& q) { out += atom(q.lhs) + " = " + atom(q.rhs); },
                 [&](const Expr::If& i) {
                   out += "if " + expr_text(i.cond) + " then " + expr_text(i.then_branch) + " else " +
                          expr_text(i.else_branch);
                 },
                 [&](const Expr::NilLit&) { out += "nil"; },
                 [&](const Expr::Cons& c) { out += atom(c.head) + " :: " + atom(c.tail); },
                 [&](const Expr::MatchList& m) {
                   out += "match " + expr_text(m.scrutinee) + " with " + m.head_var + " :: " + m.tail_var + " -> " +
                          expr_text(m.cons_branch) + " | nil -> " + expr_text(m.nil_branch);
                 },
                 [&](const Expr::DynOp& o) {
                   out += std::string(op_name(o.kind)) + "(";
                   std::vector<std::string> parts;
                   if (o.kind == OpKind::ConvField) {
                     std::string r, f;
                     structprov::detail::append_name(r, o.record_name);
                     structprov::detail::append_name(f, o.field_name);
                     parts.push_back(r);
                     parts.push_back(f);
                   } else if (o.shape) {
                     parts.push_back(structprov::to_string(*o.shape));
                   }
                   for (const auto& a : o.args) parts.push_back(expr_text(a));
                   for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
                   out += ")";
                 },
                 [&](const Expr::ExnLit&) { out += "exn"; },
                 [&](const Expr::IntCoerce& i) { out += "int(" + expr_text(i.value) + ")"; },
             },
             e->node);
}

}  // namespace detail

inline std::string to_string(const ExprPtr& e) { return detail::expr_text(e); }

/// `type C(x : Data) =` followed by one `member N : τ = e` line per member.
inline std::string to_string(const ClassDef& c) {
  std::string out = "type " + c.name + "(";
  for (std::size_t i = 0; i < c.params.size(); ++i)
    out += (i ? ", " : "") + c.params[i].first + " : " + to_string(c.params[i].second);
  out += ") =";
  if (c.members.empty()) return out + "\n";
  out += "\n";
  for (const auto& m : c.members) {
    std::string n;
    structprov::detail::append_name(n, m.name);
    out += "  member " + n + " : " + to_string(m.type) + " = " + to_string(m.body) + "\n";
  }
  return out;
}

inline std::string to_string(const ClassSet& cs) {
  std::string out;
  for (const auto& c : cs.all()) out += to_string(c);
  return out;
}

}  // namespace structprov::foo
