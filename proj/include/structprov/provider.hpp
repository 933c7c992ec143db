#pragma once

// Provided types: translation of a shape into Foo classes, a converter and
// a root type, followed by idiomatic renaming.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "structprov/foo.hpp"
#include "structprov/foo_typecheck.hpp"
#include "structprov/preferred.hpp"

namespace structprov {

struct Provided {
  foo::FooType root_type = foo::FooType::data();
  foo::ExprPtr converter;  // Data -> root_type
  foo::ClassSet classes;
  // class name -> (member name -> original field name)
  std::map<std::string, std::map<std::string, std::string>> name_map;
};

inline const std::string kRawMember = "Raw";
inline const std::string kSelf = "x";

/// Splits on non-alphanumerics and lower-to-upper boundaries, then
/// capitalises each part. Characters after the first are kept.
inline std::string pascal_case(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isalnum(c)) {
      if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
      continue;
    }
    if (!cur.empty() && std::isupper(c) && std::islower(static_cast<unsigned char>(cur.back())))
      words.push_back(std::move(cur)), cur.clear();
    cur += static_cast<char>(c);
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  std::string out;
  for (auto& w : words) {
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    out += w;
  }
  return out;
}

/// Appends 2, 3, ... to `base` until it is not in `taken`.
inline std::string uniquify(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 2;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

/// Class names: PascalCase of the hint, or C1, C2, ... without one.
class ClassNamer {
 public:
  std::string fresh(const std::optional<std::string>& hint) {
    std::string base = hint ? pascal_case(*hint) : "";
    if (base.empty() || std::isdigit(static_cast<unsigned char>(base[0]))) {
      std::string name;
      do name = "C" + std::to_string(++anonymous_);
      while (taken_.count(name));
      taken_.insert(name);
      return name;
    }
    std::string name = uniquify(base, taken_);
    taken_.insert(name);
    return name;
  }

 private:
  std::set<std::string> taken_;
  int anonymous_ = 0;
};

inline bool is_raw_member(const foo::MemberDef& m) {
  auto v = foo::as<foo::Expr::Var>(m.body);
  return m.type.is(foo::FooType::Kind::Data) && v != nullptr && m.name.rfind(kRawMember, 0) == 0;
}

namespace detail {

using foo::FooType;
using foo::ExprPtr;

struct Translation {
  FooType type;
  ExprPtr fn;  // Data -> type
};

class Provider {
 public:
  Provided run(const Shape& s, const std::optional<std::string>& root_hint) {
    Translation t = translate(s, root_hint);
    Provided p;
    p.root_type = t.type;
    p.converter = t.fn;
    for (auto& slot : slots_) p.classes.add(std::move(*slot));
    p.name_map = std::move(name_map_);
    return p;
  }

 private:
  static ExprPtr x() { return foo::var(kSelf); }
  static ExprPtr lam(ExprPtr body) { return foo::lambda(kSelf, FooType::data(), std::move(body)); }

  std::size_t reserve(const std::optional<std::string>& hint, std::string& name) {
    name = namer_.fresh(hint);
    slots_.emplace_back();
    return slots_.size() - 1;
  }

  void fill(std::size_t slot, std::string name, std::vector<foo::MemberDef> members, const Shape& origin) {
    members.push_back({kRawMember, FooType::data(), x()});
    foo::ClassDef c{std::move(name), {{kSelf, FooType::data()}}, std::move(members), shape_key(origin)};
    slots_[slot] = std::move(c);
  }

  Translation object(const std::string& name) {
    return {FooType::cls(name), lam(foo::make_new(name, {x()}))};
  }

  static bool is_primitive_type(const FooType& t) {
    using K = FooType::Kind;
    return t.is(K::Int) || t.is(K::Float) || t.is(K::Bool) || t.is(K::Text);
  }

  Translation opaque(const Shape& s, const std::optional<std::string>& hint) {
    std::string name;
    auto slot = reserve(hint, name);
    fill(slot, name, {}, s);
    return object(name);
  }

  Translation translate(const Shape& s, const std::optional<std::string>& hint) {
    switch (s.kind()) {
      case ShapeKind::Bot:
      case ShapeKind::Null: return opaque(s, hint);
      case ShapeKind::Bool:
      case ShapeKind::Bit: return {FooType::boolean(), lam(foo::conv_prim(s, x()))};
      case ShapeKind::Int: return {FooType::integer(), lam(foo::conv_prim(s, x()))};
      case ShapeKind::Text: return {FooType::text(), lam(foo::conv_prim(s, x()))};
      case ShapeKind::Float: return {FooType::floating(), lam(foo::conv_float(s, x()))};
      case ShapeKind::Nullable: {
        Translation inner = translate(s.inner(), hint);
        return {FooType::option(inner.type), lam(foo::conv_null(x(), inner.fn))};
      }
      case ShapeKind::Record: return record(s, hint);
      case ShapeKind::Any: return labelled_top(s, hint);
      case ShapeKind::Collection:
        if (s.is_homogeneous()) {
          Shape elem = s.items().empty() ? Shape::bot() : s.items()[0].shape;
          std::optional<std::string> elem_hint = hint;
          if (!elem_hint && !elem.is(ShapeKind::Any)) elem_hint = "Item";
          Translation e = translate(elem, elem_hint);
          return {FooType::list(e.type), lam(foo::conv_elements(x(), e.fn))};
        }
        return hetero(s, hint);
    }
    throw std::logic_error("unreachable");
  }

  Translation record(const Shape& s, const std::optional<std::string>& hint) {
    // Elements whose only content is a primitive body become that primitive.
    if (s.fields().size() == 1 && s.fields()[0].name == kBullet) {
      const Shape& body = s.fields()[0].shape;
      Shape inner = drop_nullable(body);
      if (inner.is_primitive()) {
        Translation t = translate(body, std::nullopt);
        return {t.type, lam(foo::conv_field(s.record_name(), kBullet, x(), t.fn))};
      }
    }
    std::optional<std::string> class_hint = s.record_name() != kBullet ? s.record_name() : hint;
    std::string name;
    auto slot = reserve(class_hint, name);
    std::vector<foo::MemberDef> members;
    for (const auto& f : s.fields()) {
      Translation t = translate(f.shape, f.name == kBullet ? std::nullopt : std::optional<std::string>(f.name));
      members.push_back({f.name, t.type, foo::conv_field(s.record_name(), f.name, x(), t.fn)});
      name_map_[name][f.name] = f.name;
    }
    fill(slot, name, std::move(members), s);
    return object(name);
  }

  Translation labelled_top(const Shape& s, const std::optional<std::string>& hint) {
    if (s.labels().empty()) return opaque(s, hint);
    std::optional<std::string> class_hint = hint;
    if (!class_hint) {
      std::string joined;
      for (const auto& l : s.labels()) joined += (joined.empty() ? "" : "Or") + pascal_case(tag_member_name(tag_of(l)));
      class_hint = joined;
    }
    std::string name;
    auto slot = reserve(class_hint, name);
    std::vector<foo::MemberDef> members;
    for (const auto& l : s.labels()) {
      std::string label = tag_member_name(tag_of(l));
      Translation t = translate(l, label);
      ExprPtr body = foo::if_then_else(foo::has_shape_op(l, x()), foo::some(foo::apply(t.fn, x())), foo::none(t.type));
      members.push_back({label, FooType::option(t.type), body});
    }
    fill(slot, name, std::move(members), s);
    return object(name);
  }

  Translation hetero(const Shape& s, const std::optional<std::string>& hint) {
    std::string name;
    auto slot = reserve(hint, name);
    std::vector<foo::MemberDef> members;
    for (const auto& entry : s.items()) {
      std::string label = tag_member_name(tag_of(entry.shape));
      std::optional<std::string> entry_hint;
      if (!entry.shape.is(ShapeKind::Collection)) entry_hint = label;
      Translation t = translate(entry.shape, entry_hint);
      ExprPtr elems = foo::conv_elements(x(), t.fn, entry.shape);
      switch (entry.multiplicity) {
        case Multiplicity::Many: members.push_back({label, FooType::list(t.type), elems}); break;
        case Multiplicity::ZeroOrOne:
          members.push_back({label, FooType::option(t.type),
                             foo::match_list(elems, "h", "t", foo::some(foo::var("h")), foo::none(t.type))});
          break;
        case Multiplicity::One: {
          // No matching element: the input is not a subshape, so get stuck.
          ExprPtr stuck_branch = foo::if_then_else(foo::conv_prim(Shape::boolean(), x()), foo::apply(t.fn, x()),
                                                   foo::apply(t.fn, x()));
          members.push_back({label, t.type, foo::match_list(elems, "h", "t", foo::var("h"), stuck_branch)});
          break;
        }
      }
    }
    fill(slot, name, std::move(members), s);
    return object(name);
  }

  ClassNamer namer_;
  std::vector<std::optional<foo::ClassDef>> slots_;
  std::map<std::string, std::map<std::string, std::string>> name_map_;
};

}  // namespace detail

/// The raw translation: one class per record, labelled top and
/// heterogeneous collection.
inline Provided provide(const Shape& s, const std::optional<std::string>& root_hint = std::nullopt) {
  return detail::Provider().run(s, root_hint);
}

/// Lifts members of "•"-typed classes into their parent, renames remaining
/// "•" members to Value, converts member names to PascalCase and resolves
/// collisions by numbering.
inline Provided normalize_names(Provided p) {
  using foo::FooType;
  std::map<std::string, std::map<std::string, std::string>> new_map;
  // Children are defined after their parents; normalize them first so a
  // parent lifts already-normalized members.
  auto& all = p.classes.all_mutable();
  for (auto ci = all.rbegin(); ci != all.rend(); ++ci) {
    foo::ClassDef& c = *ci;
    std::vector<std::pair<foo::MemberDef, std::string>> staged;  // member, original name
    const auto& old_names = p.name_map[c.name];
    auto original = [&](const std::string& n) {
      auto it = old_names.find(n);
      return it == old_names.end() ? n : it->second;
    };
    for (const auto& m : c.members) {
      if (m.name == kBullet && m.type.is(FooType::Kind::Class)) {
        const foo::ClassDef* inner = p.classes.find(m.type.class_name());
        if (inner != nullptr) {
          const auto& inner_names = new_map[inner->name];
          for (const auto& im : inner->members) {
            if (is_raw_member(im)) continue;
            auto it = inner_names.find(im.name);
            staged.push_back({{im.name, im.type, foo::member(m.body, im.name)},
                              it == inner_names.end() ? im.name : it->second});
          }
          continue;
        }
      }
      staged.push_back({m, original(m.name)});
    }
    std::set<std::string> taken;
    std::vector<foo::MemberDef> members;
    std::map<std::string, std::string> names;
    // Raw goes last so data fields keep their natural names.
    std::stable_partition(staged.begin(), staged.end(), [](const auto& sm) { return !is_raw_member(sm.first); });
    for (auto& [m, orig] : staged) {
      std::string base = m.name == kBullet ? "Value" : pascal_case(m.name);
      if (base.empty()) base = "Member";
      m.name = uniquify(base, taken);
      taken.insert(m.name);
      names[m.name] = orig;
      members.push_back(std::move(m));
    }
    c.members = std::move(members);
    new_map[c.name] = std::move(names);
  }
  p.name_map = std::move(new_map);
  return p;
}

/// provide followed by normalize_names.
inline Provided provide_normalized(const Shape& s, const std::optional<std::string>& root_hint = std::nullopt) {
  return normalize_names(provide(s, root_hint));
}

namespace detail {

inline void collect_class_names(const foo::FooType& t, std::vector<std::string>& out) {
  using K = foo::FooType::Kind;
  switch (t.kind()) {
    case K::Class: out.push_back(t.class_name()); return;
    case K::Arrow:
      collect_class_names(t.arg(), out);
      collect_class_names(t.result(), out);
      return;
    case K::List:
    case K::Option: collect_class_names(t.arg(), out); return;
    default: return;
  }
}

}  // namespace detail

/// Classes reachable from the root type through member types.
inline std::set<std::string> reachable_classes(const Provided& p) {
  std::set<std::string> seen;
  std::vector<std::string> todo;
  detail::collect_class_names(p.root_type, todo);
  while (!todo.empty()) {
    std::string n = todo.back();
    todo.pop_back();
    if (!seen.insert(n).second) continue;
    if (const auto* c = p.classes.find(n)) {
      for (const auto& m : c->members) detail::collect_class_names(m.type, todo);
    }
  }
  return seen;
}

inline std::vector<const foo::MemberDef*> visible_members(const foo::ClassDef& c) {
  std::vector<const foo::MemberDef*> out;
  for (const auto& m : c.members)
    if (!is_raw_member(m)) out.push_back(&m);
  return out;
}

/// `type Root = member Id : int, member Item : string`
inline std::string render_signature_line(const foo::ClassDef& c) {
  auto ms = visible_members(c);
  std::string out = "type " + c.name + " = ";
  if (ms.empty()) return out + "(opaque)";
  for (std::size_t i = 0; i < ms.size(); ++i)
    out += (i ? ", " : "") + std::string("member ") + ms[i]->name + " : " + foo::to_string(ms[i]->type);
  return out;
}

/// Listing of the classes visible from the root type, in definition order:
///
///   type Root =
///     member Id : int
///     member Item : string
inline std::string render_signatures(const Provided& p) {
  std::set<std::string> shown = reachable_classes(p);
  std::string out;
  if (!p.root_type.is(foo::FooType::Kind::Class)) out += "root : " + foo::to_string(p.root_type) + "\n";
  for (const auto& c : p.classes.all()) {
    if (!shown.count(c.name)) continue;
    auto ms = visible_members(c);
    if (!out.empty()) out += "\n";
    if (ms.empty()) {
      out += "type " + c.name + " = (opaque)\n";
      continue;
    }
    out += "type " + c.name + " =\n";
    for (const auto* m : ms) out += "  member " + m->name + " : " + foo::to_string(m->type) + "\n";
  }
  return out;
}

/// Hint for the root class derived from a sample path.
inline std::optional<std::string> hint_from_path(std::string_view path) {
  auto slash = path.find_last_of("/\\");
  std::string_view stem = slash == std::string_view::npos ? path : path.substr(slash + 1);
  auto q = stem.find_first_of("?#");
  if (q != std::string_view::npos) stem = stem.substr(0, q);
  auto dot = stem.find('.');
  if (dot != std::string_view::npos) stem = stem.substr(0, dot);
  if (pascal_case(stem).empty()) return std::nullopt;
  return std::string(stem);
}

}  // namespace structprov
