#include <gtest/gtest.h>

#include "structprov/foo_eval.hpp"
#include "structprov/foo_typecheck.hpp"

using namespace structprov;
using namespace structprov::foo;

namespace {
const std::string B = kBullet;
const FooType D = FooType::data();

ExprPtr lam(const std::string& x, ExprPtr body) { return lambda(x, D, std::move(body)); }

// type Person(x : Data) with Age : option<int> and Name : string.
ClassSet person_classes() {
  ClassSet cs;
  ClassDef person;
  person.name = "Person";
  person.params = {{"x", D}};
  person.members.push_back(
      {"Age", FooType::option(FooType::integer()),
       conv_field(B, "age", var("x"), lam("x2", conv_null(var("x2"), lam("x3", conv_prim(Shape::integer(), var("x3"))))))});
  person.members.push_back({"Name", FooType::text(), conv_field(B, "name", var("x"), lam("x2", conv_prim(Shape::text(), var("x2"))))});
  cs.add(person);
  return cs;
}

DataValue tomas() { return DataValue::record(B, {{"name", DataValue::string("Tomas")}}); }

EvalOutcome run(const ExprPtr& e, const ClassSet& cs = {}) { return evaluate(cs, e); }
}  // namespace

TEST(Typecheck, ConvPrimString) {
  EXPECT_EQ(typecheck({}, {{"x", D}}, conv_prim(Shape::text(), var("x"))), FooType::text());
}

TEST(Typecheck, ConvNullWrapsContinuation) {
  ExprPtr e = conv_null(var("x"), lam("y", conv_prim(Shape::integer(), var("y"))));
  EXPECT_EQ(typecheck({}, {{"x", D}}, e), FooType::option(FooType::integer()));
}

TEST(Typecheck, Errors) {
  EXPECT_THROW(typecheck({}, {}, member(make_new("Nope", {}), "A")), TypeError);
  EXPECT_THROW(typecheck({}, {}, var("x")), TypeError);
  EXPECT_THROW(typecheck_against({}, {}, some(data(DataValue::integer(1))), FooType::option(FooType::text())), TypeError);
  TypecheckOptions core;
  core.allow_extensions = false;
  EXPECT_THROW(typecheck({}, {}, exn(FooType::integer()), core), TypeError);
}

TEST(Typecheck, LiteralsTakeExpectedType) {
  ExprPtr five = data(DataValue::integer(5));
  EXPECT_EQ(typecheck({}, {}, five), FooType::integer());
  EXPECT_NO_THROW(typecheck_against({}, {}, five, D));
  EXPECT_THROW(typecheck_against({}, {}, five, FooType::text()), TypeError);
}

TEST(Typecheck, PersonClassIsWellTyped) {
  ClassSet cs = person_classes();
  EXPECT_NO_THROW(typecheck_classes(cs));
  EXPECT_EQ(typecheck(cs, {}, member(make_new("Person", {data(tomas())}), "Age")), FooType::option(FooType::integer()));
}

TEST(Reduce, ConvFloatOfInt) {
  auto r = run(conv_float(Shape::floating(), data(DataValue::integer(42))));
  ASSERT_TRUE(r.is_value());
  auto d = as<Expr::DataLit>(r.value);
  ASSERT_TRUE(d && d->value.is_float());
  EXPECT_DOUBLE_EQ(d->value.as_float(), 42.0);
}

TEST(Reduce, ConvFloatOfNumericString) {
  auto r = run(conv_float(Shape::floating(), data(DataValue::string("35.14229"))));
  ASSERT_TRUE(r.is_value());
  EXPECT_DOUBLE_EQ(as<Expr::DataLit>(r.value)->value.as_float(), 35.14229);
}

TEST(Reduce, ConvPrimBoolOf42IsStuck) {
  auto r = run(conv_prim(Shape::boolean(), data(DataValue::integer(42))));
  ASSERT_TRUE(r.is_stuck());
  EXPECT_EQ(r.stuck.op, OpKind::ConvPrim);
  ASSERT_TRUE(r.stuck.data.has_value());
  EXPECT_EQ(canonical_text(*r.stuck.data), "42");
}

TEST(Reduce, BitReadsAsIntAndBool) {
  auto i = run(conv_prim(Shape::integer(), data(DataValue::integer(1, true))));
  ASSERT_TRUE(i.is_value());
  auto b = run(conv_prim(Shape::boolean(), data(DataValue::integer(1, true))));
  ASSERT_TRUE(b.is_value());
  EXPECT_TRUE(as<Expr::DataLit>(b.value)->value.as_bool());
  auto s = run(conv_prim(Shape::boolean(), data(DataValue::string("0"))));
  ASSERT_TRUE(s.is_value());
  EXPECT_FALSE(as<Expr::DataLit>(s.value)->value.as_bool());
}

TEST(Reduce, ConvElementsOfNullIsNil) {
  auto r = run(conv_elements(data(DataValue::null()), lam("y", conv_prim(Shape::integer(), var("y")))));
  ASSERT_TRUE(r.is_value());
  EXPECT_TRUE(as<Expr::NilLit>(r.value));
}

TEST(Reduce, ConvElementsKeepsOrder) {
  DataValue xs = DataValue::list({DataValue::integer(1), DataValue::null(), DataValue::integer(3)});
  auto r = run(conv_elements(data(xs), lam("y", conv_prim(Shape::integer(), var("y")))));
  ASSERT_TRUE(r.is_value());
  EXPECT_EQ(value_text(r.value), "[1; 3]");
}

TEST(Reduce, ConvFieldAbsentGivesNull) {
  auto r = run(conv_field(B, "age", data(tomas()), lam("y", var("y"))));
  ASSERT_TRUE(r.is_value());
  EXPECT_TRUE(as<Expr::DataLit>(r.value)->value.is_null());
}

TEST(Reduce, ConvFieldOnWrongRecordIsStuck) {
  EXPECT_TRUE(run(conv_field("p", "age", data(tomas()), lam("y", var("y")))).is_stuck());
}

TEST(Reduce, ExnPropagates) {
  ExprPtr e = some(if_then_else(data(DataValue::boolean(true)), exn(FooType::integer()), data(DataValue::integer(1))));
  EXPECT_TRUE(run(e).is_exn());
}

TEST(Reduce, IntCoerceTruncates) {
  auto r = run(int_coerce(data(DataValue::floating(2.75))));
  ASSERT_TRUE(r.is_value());
  EXPECT_EQ(as<Expr::DataLit>(r.value)->value.as_int(), 2);
}

TEST(Reduce, FuelExhausted) {
  ExprPtr e = conv_elements(data(DataValue::list({DataValue::integer(1), DataValue::integer(2)})),
                            lam("y", conv_prim(Shape::integer(), var("y"))));
  EXPECT_THROW(evaluate({}, e, 1), FuelExhausted);
}

TEST(PersonClass, NameAndAge) {
  ClassSet cs = person_classes();
  ExprPtr obj = make_new("Person", {data(tomas())});
  auto name = run(member(obj, "Name"), cs);
  ASSERT_TRUE(name.is_value());
  EXPECT_EQ(value_text(name.value), "\"Tomas\"");
  auto age = run(member(obj, "Age"), cs);
  ASSERT_TRUE(age.is_value());
  EXPECT_TRUE(as<Expr::NoneLit>(age.value));
  DataValue jan = DataValue::record(B, {{"name", DataValue::string("Jan")}, {"age", DataValue::integer(25)}});
  auto jan_age = run(member(make_new("Person", {data(jan)}), "Age"), cs);
  ASSERT_TRUE(jan_age.is_value());
  EXPECT_EQ(value_text(jan_age.value), "Some(25)");
}

TEST(LabelledTop, LabelCheckFailsOnString) {
  const Shape person = Shape::record("Person", {{"name", Shape::text()}});
  ExprPtr body = if_then_else(has_shape_op(person, var("x")), some(data(DataValue::integer(1))), none(FooType::integer()));
  auto r = run(apply(lam("x", body), data(DataValue::string("x"))));
  ASSERT_TRUE(r.is_value());
  EXPECT_TRUE(as<Expr::NoneLit>(r.value));
}

TEST(HasShape, Examples) {
  EXPECT_TRUE(has_shape(Shape::floating(), DataValue::integer(7)));
  EXPECT_TRUE(has_shape(Shape::list_of(Shape::integer()), DataValue::null()));
  EXPECT_FALSE(has_shape(Shape::record("Person", {{"name", Shape::text()}}), DataValue::string("x")));
  EXPECT_FALSE(has_shape(Shape::integer(), DataValue::floating(1.5)));
  EXPECT_TRUE(has_shape(Shape::any(), DataValue::floating(1.5)));
  EXPECT_FALSE(has_shape(Shape::bit(), DataValue::integer(2)));
  const Shape opt_age = Shape::record(B, {{"age", Shape::nullable(Shape::integer())}});
  EXPECT_TRUE(has_shape(opt_age, DataValue::record(B, {})));
  EXPECT_FALSE(has_shape(Shape::record(B, {{"age", Shape::integer()}}), DataValue::record(B, {})));
}

TEST(Preservation, EachStepKeepsTheType) {
  ClassSet cs = person_classes();
  ExprPtr e = match_option(member(make_new("Person", {data(tomas())}), "Age"), "a", var("a"),
                           data(DataValue::integer(0)));
  FooType t = typecheck(cs, {}, e);
  ExprPtr cur = e;
  for (int i = 0; i < 100; ++i) {
    StepResult r = reduce_step(cs, cur);
    if (r.kind != StepResult::Kind::Stepped) break;
    cur = r.next;
    ASSERT_NO_THROW(typecheck_against(cs, {}, cur, t)) << to_string(cur);
  }
  EXPECT_EQ(value_text(cur), "0");
}

TEST(Preservation, CheckerRejectsATypeChangingStep) {
  // Negative control: a wrong "step" from option<int> to a bare int must be caught.
  ExprPtr before = some(data(DataValue::integer(3)));
  FooType t = typecheck({}, {}, before);
  EXPECT_THROW(typecheck_against({}, {}, data(DataValue::integer(3)), t), TypeError);
}
