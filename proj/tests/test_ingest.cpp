#include <gtest/gtest.h>

#include "structprov/ingest.hpp"
#include "support/fixtures.hpp"

using namespace structprov;

namespace {
std::string canon(const DataValue& d) { return canonical_text(d); }
}  // namespace

TEST(Json, ObjectBecomesBulletRecord) {
  EXPECT_EQ(canon(parse_json(R"({"name":"Jan","age":25})")), "• { age ↦ 25, name ↦ \"Jan\" }");
}

TEST(Json, Numbers) {
  EXPECT_TRUE(parse_json("3.5").is_float());
  EXPECT_TRUE(parse_json("1e2").is_float());
  EXPECT_TRUE(parse_json("25").is_int());
  EXPECT_TRUE(parse_json("-7").is_int());
}

TEST(Json, IntegersBeyond64BitsBecomeFloats) {
  DataValue d = parse_json("18446744073709551616");
  ASSERT_TRUE(d.is_float());
  EXPECT_DOUBLE_EQ(d.as_float(), 18446744073709551616.0);
  EXPECT_TRUE(parse_json("9223372036854775808").is_float());
  EXPECT_TRUE(parse_json("9223372036854775807").is_int());
}

TEST(Json, EmptyArray) { EXPECT_EQ(canon(parse_json("[]")), "[]"); }

TEST(Json, StringsStayRaw) {
  DataValue d = parse_json(R"("35.14229")");
  ASSERT_TRUE(d.is_string());
  EXPECT_EQ(d.as_string(), "35.14229");
  // JSON strings never carry the bit flag; bit recognition for them is a
  // shape-level matter.
  DataValue one = parse_json(R"([1, "1"])");
  EXPECT_FALSE(one.items()[0].bit_candidate());
}

TEST(Json, SyntaxErrorsCarryPositions) {
  try {
    parse_json("{\n  \"a\": ,\n}");
    FAIL();
  } catch (const MalformedDocument& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(Json, NonFiniteLiteralRejected) { EXPECT_THROW(parse_json("[1e999]"), UnrepresentableNumber); }

TEST(Xml, RootExample) {
  EXPECT_EQ(canon(parse_xml(testsupport::read_fixture("root.xml"))), "root { id ↦ 1, • ↦ [item { • ↦ \"Hello!\" }] }");
}

TEST(Xml, AttributesOnlyElement) {
  EXPECT_EQ(canon(parse_xml(R"(<image source="xml.png" />)")), "image { source ↦ \"xml.png\" }");
}

TEST(Xml, EmptyElementHasNoBody) { EXPECT_EQ(canon(parse_xml("<a></a>")), "a {}"); }

TEST(Xml, TextContentIsPrimitiveInferred) {
  EXPECT_EQ(canon(parse_xml("<a>42</a>")), "a { • ↦ 42 }");
  EXPECT_EQ(canon(parse_xml("<a>true</a>")), "a { • ↦ true }");
  EXPECT_EQ(canon(parse_xml("<a>4.5</a>")), "a { • ↦ 4.5 }");
}

TEST(Xml, ChildElementsWinOverFreeText) {
  EXPECT_EQ(canon(parse_xml("<a>text<b/>more</a>")), "a { • ↦ [b {}] }");
}

TEST(Xml, AttributesAreNotBitCandidates) {
  DataValue d = parse_xml(R"(<root id="1"/>)");
  EXPECT_FALSE(d.field("id")->bit_candidate());
}

TEST(Xml, MalformedReportsPosition) {
  try {
    parse_xml("<a>\n<b></a>");
    FAIL();
  } catch (const MalformedDocument& e) {
    EXPECT_GE(e.line(), 1u);
  }
}

TEST(Xml, DocFixture) {
  DataValue d = parse_xml(testsupport::read_fixture("doc.xml"));
  ASSERT_EQ(d.record_name(), "doc");
  const DataValue* body = d.field(kBullet);
  ASSERT_NE(body, nullptr);
  ASSERT_EQ(body->items().size(), 5u);
  EXPECT_EQ(canon(body->items()[4]), "image { source ↦ \"xml.png\" }");
}

TEST(Csv, AirSample) {
  DataValue d = parse_csv(testsupport::read_fixture("air.csv"));
  ASSERT_TRUE(d.is_list());
  ASSERT_EQ(d.items().size(), 4u);
  EXPECT_TRUE(d.items()[3].field("Temp")->is_null());
  EXPECT_TRUE(d.items()[1].field("Ozone")->is_float());
  EXPECT_TRUE(d.items()[0].field("Ozone")->is_int());
  EXPECT_TRUE(d.items()[2].field("Date")->is_string());
  EXPECT_EQ(canon(d.items()[0]), "• { Autofilled ↦ 0, Date ↦ \"2012-05-01\", Ozone ↦ 41, Temp ↦ 67 }");
}

TEST(Csv, CellOneStaysIntegral) {
  DataValue d = parse_csv("a\n1\n");
  const DataValue& v = *d.items()[0].field("a");
  ASSERT_TRUE(v.is_int());
  EXPECT_EQ(v.as_int(), 1);
  EXPECT_TRUE(v.bit_candidate());
  IngestConfig off;
  off.bit_inference = false;
  EXPECT_FALSE(parse_csv("a\n1\n", off).items()[0].field("a")->bit_candidate());
}

TEST(Csv, HeaderOnly) { EXPECT_EQ(canon(parse_csv("a,b\n")), "[]"); }

TEST(Csv, NoHeader) { EXPECT_THROW(parse_csv(""), EmptyInput); }

TEST(Csv, RaggedRows) {
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL();
  } catch (const MalformedDocument& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Csv, QuotedFields) {
  DataValue d = parse_csv("name,note\n\"Smith, J\",\"said \"\"hi\"\"\"\n");
  EXPECT_EQ(d.items()[0].field("name")->as_string(), "Smith, J");
  EXPECT_EQ(d.items()[0].field("note")->as_string(), "said \"hi\"");
}

TEST(Csv, CustomMissingTokens) {
  IngestConfig cfg;
  cfg.missing_tokens = {"-"};
  DataValue d = parse_csv("a\n-\n#N/A\n", cfg);
  EXPECT_TRUE(d.items()[0].field("a")->is_null());
  EXPECT_TRUE(d.items()[1].field("a")->is_string());
}

TEST(Csv, EmptyMissingTokenSetIsRejected) {
  IngestConfig cfg;
  cfg.missing_tokens.clear();
  EXPECT_THROW(parse_csv("a\n1\n", cfg), std::invalid_argument);
}

TEST(PrimitiveText, Examples) {
  IngestConfig cfg;
  EXPECT_TRUE(infer_primitive_text("#N/A", cfg).is_null());
  EXPECT_DOUBLE_EQ(infer_primitive_text("36.3", cfg).as_float(), 36.3);
  EXPECT_EQ(infer_primitive_text("2012", cfg).as_int(), 2012);
  EXPECT_TRUE(infer_primitive_text("TRUE", cfg).as_bool());
  EXPECT_EQ(infer_primitive_text("2012-05-01", cfg).as_string(), "2012-05-01");
  EXPECT_EQ(infer_primitive_text("3 kveten", cfg).as_string(), "3 kveten");
}

TEST(Formats, FromExtension) {
  EXPECT_EQ(format_from_extension("a/b.json"), SourceFormat::Json);
  EXPECT_EQ(format_from_extension("b.XML"), SourceFormat::Xml);
  EXPECT_EQ(format_from_extension("c.csv"), SourceFormat::Csv);
  EXPECT_EQ(format_from_extension("c.txt"), std::nullopt);
  EXPECT_EQ(parse_format_name("json"), SourceFormat::Json);
}
