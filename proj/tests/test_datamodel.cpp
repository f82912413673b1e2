// Values, dates, schemas, relations and the shared comparison rules.

#include <catch2/catch_amalgamated.hpp>

#include "simseql/exec.hpp"
#include "simseql/relation.hpp"
#include "simseql/schema.hpp"
#include "simseql/value.hpp"

#include "test_support.hpp"

using namespace simseql;

TEST_CASE("value factories carry kind and payload") {
    CHECK(Value().kind() == ValueKind::Null);
    CHECK(Value().is_null());
    CHECK(Value::integer(7).kind() == ValueKind::Integer);
    CHECK(Value::integer(7).as_int() == 7);
    CHECK(Value::long_int(1u << 20).kind() == ValueKind::Long);
    CHECK(Value::date(0).kind() == ValueKind::Date);
    CHECK(Value::floating(2.5).as_float() == 2.5);
    CHECK(Value::string("abc").as_string() == "abc");
    CHECK(Value::vector({1, 2}).as_vector() == std::vector<double>{1, 2});

    ImageRaster img;
    img.width = 2;
    img.height = 1;
    img.rgb = {0, 0, 0, 255, 255, 255};
    CHECK(Value::raster(img).as_raster() == img);
}

TEST_CASE("raster byte count must match its dimensions") {
    ImageRaster bad;
    bad.width = 2;
    bad.height = 2;
    bad.rgb = {1, 2, 3};  // needs 12 bytes
    CHECK_THROWS_WITH(Value::raster(bad), "image raster byte count does not match its dimensions");
}

TEST_CASE("numeric view spans integer, long, date and float") {
    CHECK(Value::integer(3).numeric() == 3.0);
    CHECK(Value::long_int(-4).numeric() == -4.0);
    CHECK(Value::date(10).numeric() == 10.0);
    CHECK(Value::floating(0.5).numeric() == 0.5);
    CHECK(Value::integer(1).is_numeric());
    CHECK_FALSE(Value::string("1").is_numeric());
    CHECK_FALSE(Value().is_numeric());
}

TEST_CASE("structural equality is exact-kind and never true for null") {
    CHECK(Value::integer(5).equals(Value::integer(5)));
    CHECK_FALSE(Value::integer(5).equals(Value::long_int(5)));  // same payload, other kind
    CHECK_FALSE(Value::integer(5).equals(Value::floating(5.0)));
    CHECK_FALSE(Value().equals(Value()));
    CHECK_FALSE(Value().equals(Value::integer(0)));
    CHECK(Value::string("x").equals(Value::string("x")));
    CHECK_FALSE(Value::string("x").equals(Value::string("X")));
    CHECK(Value::vector({1, 2}).equals(Value::vector({1, 2})));
    CHECK_FALSE(Value::vector({1, 2}).equals(Value::vector({1, 2, 3})));
}

TEST_CASE("total order sorts null first and is deterministic across kinds") {
    CHECK(Value().order(Value::integer(-100)) < 0);
    CHECK(Value::integer(1).order(Value()) > 0);
    CHECK(Value().order(Value()) == 0);
    CHECK(Value::integer(1).order(Value::integer(2)) < 0);
    CHECK(Value::string("a").order(Value::string("b")) < 0);
    CHECK(Value::vector({1}).order(Value::vector({1, 0})) < 0);
    CHECK(Value::vector({2}).order(Value::vector({1, 9})) > 0);

    // Kind rank splits distinct kinds; ValueLess gives a usable strict order.
    std::vector<Value> vs = {Value::string("m"), Value(), Value::integer(3), Value::floating(0.1)};
    std::sort(vs.begin(), vs.end(), ValueLess{});
    CHECK(vs[0].is_null());
    CHECK(vs[1].kind() == ValueKind::Integer);
    CHECK(vs[2].kind() == ValueKind::String);
    CHECK(vs[3].kind() == ValueKind::Float);
}

TEST_CASE("civil date conversions agree with the 1970 epoch") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(1970, 1, 2) == 1);
    CHECK(days_from_civil(1969, 12, 31) == -1);
    CHECK(days_from_civil(2000, 3, 1) == 11017);

    for (int64_t d : {int64_t(0), int64_t(-719468), int64_t(19783), int64_t(60000)}) {
        CivilDate c = civil_from_days(d);
        CHECK(days_from_civil(c.year, c.month, c.day) == d);
    }
}

TEST_CASE("date text round-trips and rejects malformed input") {
    CHECK(format_date(0) == "1970-01-01");
    CHECK(parse_date("1970-01-01") == 0);
    CHECK(format_date(parse_date("2024-02-29")) == "2024-02-29");
    CHECK(format_date(parse_date("0001-01-01")) == "0001-01-01");

    CHECK_THROWS_WITH(parse_date("19700101"),
                      "malformed date literal '19700101', expected YYYY-MM-DD");
    CHECK_THROWS_AS(parse_date("1970-13-01"), RuntimeError);
    CHECK_THROWS_AS(parse_date("1970-00-10"), RuntimeError);
    CHECK_THROWS_AS(parse_date("1970-01-32"), RuntimeError);
    CHECK_THROWS_AS(parse_date("not-a-date"), RuntimeError);
}

TEST_CASE("number rendering") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(-2.25) == "-2.25");
    CHECK(format_double(kInfinity) == "inf");
    CHECK(format_double(-kInfinity) == "-inf");

    CHECK(format_distance(0.25) == "0.25");
    CHECK(format_distance(2.0) == "2");
    CHECK(format_distance(1.0 / 3.0) == "0.333333");
    CHECK(format_distance(kInfinity) == "inf");
}

TEST_CASE("schema rejects duplicate attribute names, case-insensitively") {
    auto attr = [](const char* n) {
        AttributeDef d;
        d.name = n;
        d.type = DataTypeId{"integer"};
        return d;
    };
    CHECK_THROWS_WITH(Schema({attr("id"), attr("ID")}), "duplicate attribute name 'ID' in schema");

    Schema s({attr("id"), attr("val")});
    CHECK(s.find("VAL").value() == 1);
    CHECK_FALSE(s.find("missing").has_value());
    CHECK_THROWS_AS(s.require("missing"), BindError);
}

TEST_CASE("relation appends validate arity and attribute kinds") {
    Catalog cat = make_builtin_catalog();
    auto rel = test::make_relation(cat, "t", {{"id", "integer"}, {"name", "string"}});

    CHECK_THROWS_WITH(rel->append({Value::integer(1)}),
                      "tuple arity 1 does not match schema of 't' (2 attributes)");
    CHECK_THROWS_WITH(rel->append({Value::integer(1), Value::integer(2)}),
                      "attribute 'name' of 't' expects string, got integer");
    CHECK_THROWS_WITH(rel->append({Value::long_int(1), Value::string("a")}),
                      "attribute 'id' of 't' expects integer, got long");

    // Null is allowed in any cell.
    rel->append({Value(), Value()});
    CHECK(rel->row_count() == 1);
}

TEST_CASE("row ids are monotone from 1 and stay addressable") {
    Catalog cat = make_builtin_catalog();
    auto rel = test::make_relation(cat, "t", {{"id", "integer"}});

    CHECK(rel->append({Value::integer(10)}) == 1);
    CHECK(rel->append({Value::integer(20)}) == 2);
    CHECK(rel->append({Value::integer(30)}) == 3);

    CHECK(rel->row_by_id(2).values[0].as_int() == 20);
    CHECK_THROWS_WITH(rel->row_by_id(99), "row id 99 not present in 't'");

    // Duplicate rows are kept; this is a multiset.
    rel->append({Value::integer(10)});
    CHECK(rel->row_count() == 4);
}

TEST_CASE("maintenance hooks observe every append with the hooked attribute") {
    Catalog cat = make_builtin_catalog();
    auto rel = test::make_relation(cat, "t", {{"id", "integer"}, {"v", "float"}});

    struct Probe : IndexMaintenance {
        std::vector<std::pair<RowId, double>> seen;
        void on_append(RowId id, const Value& v) override {
            seen.emplace_back(id, v.is_null() ? -1.0 : v.as_float());
        }
        size_t attribute() const override { return 1; }
    };
    auto probe = std::make_shared<Probe>();
    rel->append({Value::integer(1), Value::floating(0.5)});
    rel->attach_maintenance(probe);
    rel->append({Value::integer(2), Value::floating(1.5)});
    rel->append({Value::integer(3), Value()});

    REQUIRE(probe->seen.size() == 2);
    CHECK(probe->seen[0] == std::pair<RowId, double>{2, 1.5});
    CHECK(probe->seen[1] == std::pair<RowId, double>{3, -1.0});
}

TEST_CASE("text corpus is cached per attribute and rebuilt after appends") {
    Catalog cat = make_builtin_catalog();
    auto rel = test::make_relation(cat, "docs", {{"body", "string"}});
    rel->append({Value::string("red apple")});
    rel->append({Value::string("green apple")});
    rel->append({Value::string("blue sky")});

    auto c1 = rel->text_corpus(0);
    CHECK(rel->text_corpus(0) == c1);  // cached between appends
    double idf_apple = c1->idf("apple");
    double idf_red = c1->idf("red");
    CHECK(idf_red > idf_apple);  // rarer term weighs more

    rel->append({Value::string("red wine")});
    auto c2 = rel->text_corpus(0);
    CHECK(c2 != c1);
    CHECK(c2->idf("red") < idf_red);  // "red" got more common

    // Null cells do not contribute documents.
    rel->append({Value()});
    CHECK(rel->text_corpus(0)->idf("apple") == c2->idf("apple"));
}

TEST_CASE("compare_values: null yields no result, mixed numerics compare by value") {
    CHECK_FALSE(compare_values(Value(), Value::integer(1)).has_value());
    CHECK_FALSE(compare_values(Value::integer(1), Value()).has_value());
    CHECK(compare_values(Value::integer(2), Value::integer(2)) == 0);
    CHECK(compare_values(Value::integer(2), Value::floating(2.5)) == -1);
    CHECK(compare_values(Value::long_int(3), Value::integer(2)) == 1);
    CHECK(compare_values(Value::string("a"), Value::string("b")) == -1);
    CHECK(compare_values(Value::date(5), Value::integer(5)) == 0);

    CHECK_THROWS_WITH(compare_values(Value::string("a"), Value::integer(1)),
                      "cannot compare string with integer");

    CHECK(values_equal_numeric(Value::integer(4), Value::floating(4.0)));
    CHECK_FALSE(values_equal_numeric(Value(), Value()));
}

TEST_CASE("image rasters order lexicographically by shape then bytes") {
    ImageRaster a{1, 1, {0, 0, 0}};
    ImageRaster b{1, 1, {0, 0, 1}};
    ImageRaster c{2, 1, {0, 0, 0, 0, 0, 0}};
    CHECK(a < b);
    CHECK(a < c);
    CHECK_FALSE(b < a);
    CHECK(Value::raster(a).order(Value::raster(b)) < 0);
    CHECK(Value::raster(a).equals(Value::raster(a)));
}
