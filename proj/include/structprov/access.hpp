#pragma once

// Running provided types on input data: conversion, member paths such as
// `Main.Temp` or `[1].Age`, and walks over every member of a result.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "structprov/foo_eval.hpp"
#include "structprov/provider.hpp"

namespace structprov {

struct PathStep {
  enum class Kind { Member, Index } kind;
  std::string member;
  std::size_t index = 0;
};

inline std::string path_text(const std::vector<PathStep>& path) {
  std::string out;
  for (const auto& s : path) {
    if (s.kind == PathStep::Kind::Index) {
      out += "[" + std::to_string(s.index) + "]";
    } else {
      out += (out.empty() ? "" : ".") + s.member;
    }
  }
  return out;
}

/// `Main.Temp`, `[1].Age`, `.Items[0].Name`. Indices are zero-based.
inline std::vector<PathStep> parse_access_path(std::string_view text) {
  std::vector<PathStep> out;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) {
    return std::invalid_argument("bad access path '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '.') {
      ++i;
      continue;
    }
    if (c == '[') {
      auto close = text.find(']', i);
      if (close == std::string_view::npos) throw bad("unclosed '['");
      auto n = lexical::parse_int(text.substr(i + 1, close - i - 1));
      if (!n || *n < 0) throw bad("index must be a non-negative integer");
      out.push_back({PathStep::Kind::Index, {}, static_cast<std::size_t>(*n)});
      i = close + 1;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && text[i] != '.' && text[i] != '[') ++i;
    out.push_back({PathStep::Kind::Member, std::string(text.substr(start, i - start)), 0});
  }
  if (out.empty()) throw bad("empty path");
  return out;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (std::tolower(static_cast<unsigned char>(a[i - 1])) !=
                                       std::tolower(static_cast<unsigned char>(b[j - 1])));
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Member names closest to `wanted`, best first; all visible members when
/// none is close.
inline std::vector<std::string> suggest_members(const foo::ClassDef& c, std::string_view wanted) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto* m : visible_members(c)) scored.push_back({edit_distance(wanted, m->name), m->name});
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (const auto& [d, n] : scored)
    if (d <= std::max<std::size_t>(2, wanted.size() / 3)) out.push_back(n);
  if (out.empty())
    for (const auto& [d, n] : scored) out.push_back(n);
  return out;
}

/// The converter applied to `d`.
inline foo::EvalOutcome convert(const Provided& p, const DataValue& d, std::size_t fuel = foo::kDefaultFuel) {
  return foo::evaluate(p.classes, foo::apply(p.converter, foo::data(d)), fuel);
}

struct PathResult {
  foo::EvalOutcome outcome;
  std::string at;  // path prefix where evaluation ended
};

/// Member of `c` addressed by `name`: the normalized name, or else the
/// original field name it came from.
inline const foo::MemberDef* resolve_member(const Provided& p, const foo::ClassDef& c, const std::string& name) {
  if (const foo::MemberDef* m = c.member(name)) return m;
  auto it = p.name_map.find(c.name);
  if (it == p.name_map.end()) return nullptr;
  for (const auto& [member, original] : it->second)
    if (original == name) return c.member(member);
  return nullptr;
}

/// Follows a member path from the value of `start`. Options along the way
/// are unwrapped; reaching None ends the walk with None. Throws
/// UnknownMember and std::out_of_range for bad steps.
inline PathResult eval_path_from(const Provided& p, const foo::ExprPtr& start, const std::vector<PathStep>& path,
                                 std::size_t fuel = foo::kDefaultFuel) {
  foo::EvalOutcome cur = foo::evaluate(p.classes, start, fuel);
  std::vector<PathStep> done;
  for (const auto& step : path) {
    if (!cur.is_value()) return {cur, path_text(done)};
    foo::ExprPtr v = cur.value;
    while (auto s = foo::as<foo::Expr::SomeOf>(v)) v = s->value;
    if (foo::as<foo::Expr::NoneLit>(v)) return {cur, path_text(done)};
    if (step.kind == PathStep::Kind::Index) {
      std::size_t i = 0;
      while (auto c = foo::as<foo::Expr::Cons>(v)) {
        if (i == step.index) break;
        v = c->tail;
        ++i;
      }
      auto c = foo::as<foo::Expr::Cons>(v);
      if (c == nullptr)
        throw std::out_of_range("index " + std::to_string(step.index) + " out of range at '" + path_text(done) + "'");
      cur = {foo::EvalOutcome::Kind::Value, c->head, {}, 0};
    } else {
      auto obj = foo::as<foo::Expr::New>(v);
      if (obj == nullptr) throw UnknownMember(step.member, {});
      const foo::ClassDef* c = p.classes.find(obj->cls);
      const foo::MemberDef* m = c ? resolve_member(p, *c, step.member) : nullptr;
      if (m == nullptr)
        throw UnknownMember(step.member, c ? suggest_members(*c, step.member) : std::vector<std::string>{});
      cur = foo::evaluate(p.classes, foo::member(v, m->name), fuel);
    }
    done.push_back(step);
  }
  return {cur, path_text(done)};
}

inline PathResult eval_path(const Provided& p, const DataValue& d, const std::vector<PathStep>& path,
                            std::size_t fuel = foo::kDefaultFuel) {
  return eval_path_from(p, foo::apply(p.converter, foo::data(d)), path, fuel);
}

struct WalkReport {
  std::size_t members_evaluated = 0;
  std::size_t values_visited = 0;
  // Every stuck state found, with the member path that produced it.
  std::vector<std::pair<std::string, foo::StuckInfo>> stuck;
  std::size_t exns = 0;
};

/// Evaluates every member of every object reachable from `v`, descending
/// into options and lists.
inline void walk_value(const Provided& p, const foo::ExprPtr& v, const std::string& path, WalkReport& report,
                       std::size_t fuel = foo::kDefaultFuel) {
  ++report.values_visited;
  if (auto s = foo::as<foo::Expr::SomeOf>(v)) return walk_value(p, s->value, path, report, fuel);
  if (foo::as<foo::Expr::Cons>(v)) {
    std::size_t i = 0;
    for (foo::ExprPtr cur = v; auto c = foo::as<foo::Expr::Cons>(cur); cur = c->tail, ++i)
      walk_value(p, c->head, path + "[" + std::to_string(i) + "]", report, fuel);
    return;
  }
  auto obj = foo::as<foo::Expr::New>(v);
  if (obj == nullptr) return;
  const foo::ClassDef* c = p.classes.find(obj->cls);
  if (c == nullptr) return;
  for (const auto& m : c->members) {
    ++report.members_evaluated;
    std::string mp = path + "." + m.name;
    foo::EvalOutcome out = foo::evaluate(p.classes, foo::member(v, m.name), fuel);
    if (out.is_stuck()) {
      report.stuck.push_back({mp, out.stuck});
    } else if (out.is_exn()) {
      ++report.exns;
    } else {
      walk_value(p, out.value, mp, report, fuel);
    }
  }
}

/// Converts `d` and walks the whole result.
inline WalkReport walk_all(const Provided& p, const DataValue& d, std::size_t fuel = foo::kDefaultFuel) {
  WalkReport report;
  foo::EvalOutcome root = convert(p, d, fuel);
  if (root.is_stuck()) {
    report.stuck.push_back({"", root.stuck});
    return report;
  }
  if (root.is_value()) walk_value(p, root.value, "", report, fuel);
  return report;
}

}  // namespace structprov
