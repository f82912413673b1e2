// Name resolution and typing: output schemas of the showcase queries, scope
// rules for attribute/distance/rank columns, and the bind-time error catalog.

#include <catch2/catch_amalgamated.hpp>

#include "simseql/engine.hpp"

#include "test_support.hpp"

using namespace simseql;
using Catch::Matchers::ContainsSubstring;

namespace {

Catalog showcase_catalog() {
    Catalog cat = make_builtin_catalog();
    test::make_relation(
        cat, "image",
        {{"id", "integer"},
         {"image", "binary_image"},
         {"color", "number_vector", {{"mpeg7_color_layout_metric"}, {"l1_metric"}}},
         {"shape", "number_vector", {{"mpeg7_contour_shape_metric"}, {"l2_metric"}}},
         {"title", "string", {{"tf_idf"}}},
         {"location", "string", {{"simple_edit_distance"}}},
         {"date", "date", {{"l1_metric"}}}});
    test::make_relation(cat, "video_frame",
                        {{"id", "integer"},
                         {"video_id", "integer"},
                         {"face_descriptor", "number_vector", {{"mpeg7_face_metric"}}},
                         {"subtitles", "string", {{"tf_idf"}}},
                         {"time_second", "long", {{"l1_metric"}}},
                         {"color", "number_vector", {{"mpeg7_color_layout_metric"}}},
                         {"shape", "number_vector", {{"mpeg7_contour_shape_metric"}}}});
    test::make_relation(
        cat, "keyword",
        {{"id", "integer"},
         {"value", "string", {{"simple_edit_distance"}, {"weighted_edit_distance", {1, 2, 2}}}}});
    test::make_relation(cat, "image_keyword",
                        {{"image_id", "integer"}, {"keyword_id", "integer"}});
    return cat;
}

ParamBinding showcase_params() {
    ParamBinding p;
    ImageRaster px;
    px.width = 1;
    px.height = 1;
    px.rgb = {120, 30, 200};
    p.emplace("queryImage", Value::vector(std::vector<double>(16, 0.5)));
    p.emplace("o1", Value::raster(px));
    p.emplace("o2", Value::raster(px));
    p.emplace("o3", Value::raster(px));
    p.emplace("ObamaFace", Value::vector(std::vector<double>(8, 0.1)));
    p.emplace("BushFace", Value::vector(std::vector<double>(8, 0.9)));
    p.emplace("VesuvImage", Value::raster(px));
    p.emplace("Image", Value::vector(std::vector<double>(12, 1.0)));
    return p;
}

std::shared_ptr<BoundSelect> prep(const Catalog& cat, std::string_view sql,
                                  const ParamBinding& params = {}) {
    return Engine(cat).prepare(sql, params);
}

void expect_col(const ExecColumn& c, std::string_view qual, std::string_view name, ColumnKind k,
                std::string_view type) {
    CHECK(c.qualifier == qual);
    CHECK(ci_equal(c.name, name));
    CHECK(c.ckind == k);
    CHECK(ci_equal(c.type.name, type));
}

}  // namespace

TEST_CASE("knn query binds id and the search distance") {
    Catalog cat = showcase_catalog();
    auto b = prep(cat, "SELECT TOP 30 id, distance FROM SIMSEARCH :queryImage IN image BY shape",
                  showcase_params());
    REQUIRE(b->output.size() == 2);
    expect_col(b->output.at(0), "image", "id", ColumnKind::Attr, "integer");
    expect_col(b->output.at(1), "", "distance", ColumnKind::Distance, "float");
    CHECK(b->output.at(1).vkind == ValueKind::Float);
    CHECK(b->output.at(1).answers_to("image"));
    CHECK(b->top_n == 30);
}

TEST_CASE("named distance function query binds over keyword") {
    Catalog cat = showcase_catalog();
    auto b = prep(cat,
                  "SELECT value FROM SIMSEARCH 'feather' IN keyword BY value "
                  "DISTANCE FUNCTION weighted_edit_distance(1,2,2) WHERE distance <= 2");
    REQUIRE(b->output.size() == 1);
    expect_col(b->output.at(0), "keyword", "value", ColumnKind::Attr, "string");
}

TEST_CASE("star over a pairwise search expands attribute columns of both sides") {
    Catalog cat = showcase_catalog();
    auto b = prep(cat,
                  "SELECT * FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
                  "BY simple_edit_distance(k1.value, k2.value) METHOD MessifSimilarityJoin(1)");
    REQUIRE(b->output.size() == 4);
    expect_col(b->output.at(0), "k1", "id", ColumnKind::Attr, "integer");
    expect_col(b->output.at(1), "k1", "value", ColumnKind::Attr, "string");
    expect_col(b->output.at(2), "k2", "id", ColumnKind::Attr, "integer");
    expect_col(b->output.at(3), "k2", "value", ColumnKind::Attr, "string");

    // The shared distance column answers to either source label.
    auto d = prep(cat,
                  "SELECT k1.distance FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
                  "BY simple_edit_distance(k1.value, k2.value) METHOD MessifSimilarityJoin(1)");
    expect_col(d->output.at(0), "", "distance", ColumnKind::Distance, "float");
}

TEST_CASE("extracted objects and a set distance bind over image") {
    Catalog cat = showcase_catalog();
    auto b = prep(cat,
                  "SELECT TOP 1 title FROM SIMSEARCH "
                  "extract_MPEG7_color_layout(:o1) AS co1, extract_MPEG7_color_layout(:o2) AS co2, "
                  "extract_MPEG7_contour_shape(:o3) AS sh3 IN image BY minimum("
                  "DISTANCE(co1, color), DISTANCE(co2, color), DISTANCE(sh3, shape))",
                  showcase_params());
    REQUIRE(b->output.size() == 1);
    expect_col(b->output.at(0), "image", "title", ColumnKind::Attr, "string");
}

TEST_CASE("joined searches and nested searches expose source-qualified columns") {
    Catalog cat = showcase_catalog();
    auto q5 = prep(cat,
                   "SELECT DISTINCT vf1.video_id FROM "
                   "SIMSEARCH :ObamaFace IN video_frame AS vf1 BY face_descriptor "
                   "METHOD rangeQuery(0.01) INNER JOIN "
                   "SIMSEARCH :BushFace IN video_frame AS vf2 BY face_descriptor "
                   "METHOD rangeQuery(0.01) ON (vf1.video_id = vf2.video_id)",
                   showcase_params());
    REQUIRE(q5->output.size() == 1);
    expect_col(q5->output.at(0), "vf1", "video_id", ColumnKind::Attr, "integer");
    CHECK(q5->has_distinct);

    auto q6 = prep(cat,
                   "SELECT vf1.video_id FROM SIMSEARCH IN "
                   "SIMSEARCH extract_MPEG7_color_layout(:VesuvImage) AS co, "
                   "extract_MPEG7_contour_shape(:VesuvImage) AS sh IN video_frame AS vf1 "
                   "BY weight_sum((DISTANCE(shape, sh), 0.7), (DISTANCE(color, co), 0.2)) "
                   "METHOD MessifRangeQuery(0.1,15000) NATURAL JOIN "
                   "SIMSEARCH 'vulcano' IN video_frame AS vf2 BY subtitles "
                   "METHOD MessifRangeQuery(0.1,15000) "
                   "BY DISTANCE(vf1.time_second, vf2.time_second) AS sim_frames "
                   "WHERE sim_frames.distance <= 120",
                   showcase_params());
    REQUIRE(q6->output.size() == 1);
    expect_col(q6->output.at(0), "vf1", "video_id", ColumnKind::Attr, "integer");
}

TEST_CASE("aggregating subquery chain binds with aliases and grouping") {
    Catalog cat = showcase_catalog();
    auto q7 = prep(cat,
                   "SELECT value FROM keyword WHERE id IN ("
                   "SELECT TOP 10 keyword_id, count(image_id) AS frequency FROM "
                   "(SELECT TOP 30 id FROM SIMSEARCH :Image IN image BY color "
                   "DISTANCE FUNCTION l1_metric) AS simimage "
                   "INNER JOIN image_keyword ON (simimage.id = image_keyword.image_id) "
                   "GROUP BY keyword_id HAVING frequency > 3 ORDER BY frequency DESC)",
                   showcase_params());
    REQUIRE(q7->output.size() == 1);
    expect_col(q7->output.at(0), "keyword", "value", ColumnKind::Attr, "string");
}

TEST_CASE("aggregate columns are named by their printed call") {
    Catalog cat = showcase_catalog();
    auto b = prep(cat,
                  "SELECT keyword_id, count(image_id) FROM image_keyword GROUP BY keyword_id");
    REQUIRE(b->output.size() == 2);
    expect_col(b->output.at(0), "", "keyword_id", ColumnKind::Attr, "integer");
    CHECK(b->output.at(1).name == "count(image_id)");
    CHECK(b->output.at(1).vkind == ValueKind::Long);
    CHECK(ci_equal(b->output.at(1).type.name, "long"));

    auto a = prep(cat, "SELECT count(*) AS n FROM image_keyword GROUP BY keyword_id");
    CHECK(a->output.at(0).name == "n");
}

TEST_CASE("distance and rank columns answer to the search alias and source labels") {
    Catalog cat = showcase_catalog();
    auto b = prep(cat,
                  "SELECT k1.value, sim_kw.distance, rank FROM "
                  "SIMSEARCH 'x' IN keyword AS k1 BY value AS sim_kw");
    REQUIRE(b->output.size() == 3);
    expect_col(b->output.at(0), "k1", "value", ColumnKind::Attr, "string");
    expect_col(b->output.at(1), "sim_kw", "distance", ColumnKind::Distance, "float");
    CHECK(b->output.at(1).answers_to("k1"));
    expect_col(b->output.at(2), "sim_kw", "rank", ColumnKind::Rank, "long");
    CHECK(b->output.at(2).vkind == ValueKind::Long);
}

TEST_CASE("relation aliases replace the base name for qualification") {
    Catalog cat = showcase_catalog();
    CHECK_NOTHROW(prep(cat, "SELECT keyword.value FROM keyword"));
    CHECK_THROWS_WITH(prep(cat, "SELECT keyword.value FROM keyword AS k"),
                      "unknown column 'keyword.value'");
    CHECK_NOTHROW(prep(cat, "SELECT k.value FROM keyword AS k"));
}

TEST_CASE("select aliases are visible to ordering") {
    Catalog cat = showcase_catalog();
    CHECK_NOTHROW(prep(cat, "SELECT value AS v FROM keyword ORDER BY v"));
    CHECK_NOTHROW(prep(cat,
                       "SELECT keyword_id, count(image_id) AS n FROM image_keyword "
                       "GROUP BY keyword_id HAVING n > 2 ORDER BY n DESC"));
}

TEST_CASE("unknown and ambiguous names are reported with their spelling") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM nope"), "unknown relation 'nope'");
    CHECK_THROWS_WITH(prep(cat, "SELECT zz FROM keyword"), "unknown column 'zz'");
    CHECK_THROWS_WITH(prep(cat, "SELECT k.zz FROM keyword AS k"), "unknown column 'k.zz'");
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM image, keyword"),
                      "ambiguous column reference 'id'");
    CHECK_THROWS_WITH(prep(cat, "SELECT id AS x, value AS x FROM keyword"),
                      "duplicate column alias 'x'");
}

TEST_CASE("distance references need exactly one similarity search in scope") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE distance <= 2"),
                      "no similarity search in scope for DISTANCE");
    CHECK_THROWS_WITH(prep(cat, "SELECT s.distance FROM keyword AS s"),
                      "no similarity search named 's' in scope for DISTANCE");
    CHECK_THROWS_WITH(
        prep(cat,
             "SELECT distance FROM SIMSEARCH 'a' IN keyword BY value INNER JOIN "
             "SIMSEARCH 'b' IN keyword AS k2 BY value ON (keyword.id = k2.id)"),
        "ambiguous DISTANCE reference; qualify it with an alias");
}

TEST_CASE("grouping rules are enforced") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT count(id) FROM keyword"),
                      "count(...) requires GROUP BY");
    CHECK_THROWS_WITH(prep(cat, "SELECT value FROM keyword GROUP BY id"),
                      "column 'value' must appear in GROUP BY or inside count()");
    CHECK_THROWS_WITH(prep(cat, "SELECT * FROM keyword GROUP BY id"),
                      "SELECT * cannot be combined with GROUP BY");
    CHECK_THROWS_WITH(prep(cat, "SELECT sum(id) FROM keyword GROUP BY id"),
                      "unknown aggregate 'sum'");
    CHECK_THROWS_WITH(prep(cat, "SELECT count(id, value) FROM keyword GROUP BY id"),
                      "count(...) takes one argument");
}

TEST_CASE("expression contexts reject the wrong shapes") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT id = 3 FROM keyword"), "condition not allowed here");
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE id + 1"),
                      "expected a condition, found an arithmetic expression");
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE 'abc'"), "expected a condition");
    CHECK_THROWS_WITH(prep(cat, "SELECT foo(id) FROM keyword"),
                      "unknown function 'foo' in this context");
    CHECK_THROWS_WITH(prep(cat, "SELECT (id, value) FROM keyword"),
                      "pair syntax is only allowed inside an aggregated distance");
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE (SELECT id FROM keyword) = 3"),
                      "subquery is only allowed with IN or as a query object");
    CHECK_THROWS_WITH(prep(cat, "SELECT value + 1 FROM keyword"),
                      "arithmetic needs numeric operands, got 'string' and 'integer'");
}

TEST_CASE("comparisons require compatible operand types") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE value = 3"),
                      "cannot compare 'string' with 'integer'");
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE id IN (SELECT value FROM keyword)"),
                      "cannot compare 'integer' with 'string'");
    CHECK_NOTHROW(prep(cat, "SELECT id FROM keyword WHERE id IN (SELECT id FROM keyword)"));
    // Date columns compare against date literals written as strings.
    CHECK_NOTHROW(prep(cat, "SELECT id FROM image WHERE date = '2020-01-01'"));
    CHECK_NOTHROW(prep(cat, "SELECT id FROM image WHERE '2020-06-01' > date"));
    // Mixed numeric widths compare fine.
    CHECK_NOTHROW(prep(cat, "SELECT id FROM video_frame WHERE time_second = 10"));
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM image ORDER BY color"),
                      "ordering is not defined for 'number_vector'");
}

TEST_CASE("parameters must be bound at prepare time") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT id FROM keyword WHERE id = :missing"),
                      "unbound parameter :missing");
    ParamBinding p;
    p.emplace("missing", Value::integer(3));
    CHECK_NOTHROW(prep(cat, "SELECT id FROM keyword WHERE id = :missing", p));
}

TEST_CASE("distance function applications are type checked") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(
        prep(cat, "SELECT value FROM SIMSEARCH 'x' IN keyword BY value DISTANCE FUNCTION l2_metric"),
        "distance function 'l2_metric' does not accept attribute 'value' of type 'string'");
    CHECK_THROWS_WITH(prep(cat,
                           "SELECT value FROM SIMSEARCH 'x' IN keyword BY value "
                           "DISTANCE FUNCTION weighted_edit_distance(1)"),
                      "distance function 'weighted_edit_distance' expects 3 argument(s), got 1");
    CHECK_THROWS_WITH(prep(cat,
                           "SELECT value FROM SIMSEARCH 'x' IN keyword BY value "
                           "DISTANCE FUNCTION no_such_fn"),
                      "unknown distance function 'no_such_fn'");
    CHECK_THROWS_WITH(prep(cat,
                           "SELECT k1.value FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
                           "BY simple_edit_distance(k1.value) METHOD MessifSimilarityJoin(1)"),
                      "distance function 'simple_edit_distance' needs two operands");
    CHECK_THROWS_WITH(prep(cat,
                           "SELECT value FROM SIMSEARCH 'x' IN keyword BY DISTANCE(value, id)"),
                      "distance operands of type 'string' and 'integer' are not compatible");
    CHECK_THROWS_AS(prep(cat,
                         "SELECT k1.value FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
                         "BY simple_edit_distance(k1.value = 'x', k2.value) "
                         "METHOD MessifSimilarityJoin(1)"),
                    BindError);
}

TEST_CASE("search methods validate their argument and source shapes") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_WITH(prep(cat, "SELECT value FROM SIMSEARCH 'x' IN keyword BY value METHOD kNN(5)"),
                      "unknown search method 'kNN'");
    CHECK_THROWS_WITH(
        prep(cat, "SELECT value FROM SIMSEARCH 'x' IN keyword BY value METHOD rangeQuery()"),
        ContainsSubstring("expects 1 argument(s), got 0"));
    CHECK_THROWS_AS(
        prep(cat, "SELECT value FROM SIMSEARCH 'x' IN keyword BY value METHOD rangeQuery('far')"),
        BindError);
    CHECK_THROWS_WITH(
        prep(cat,
             "SELECT k1.value FROM SIMSEARCH 'x' IN keyword AS k1, keyword AS k2 "
             "BY simple_edit_distance(k1.value, k2.value) METHOD MessifSimilarityJoin(1)"),
        ContainsSubstring("takes no query objects"));
    CHECK_THROWS_WITH(
        prep(cat, "SELECT value FROM SIMSEARCH IN keyword BY value METHOD reverseKnn(2)"),
        ContainsSubstring("needs exactly one query object"));
    CHECK_THROWS_WITH(
        prep(cat, "SELECT value FROM SIMSEARCH IN keyword BY value METHOD MessifSimilarityJoin(1)"),
        ContainsSubstring("needs exactly 2 source(s), got 1"));
    CHECK_THROWS_WITH(
        prep(cat,
             "SELECT k1.value FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
             "BY k1.value METHOD MessifSimilarityJoin(1)"),
        "a pairwise search method needs a single distance call over one attribute from each source");
    CHECK_THROWS_WITH(
        prep(cat,
             "SELECT k1.value FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
             "BY simple_edit_distance(k1.value, k2.value) + 1 METHOD MessifSimilarityJoin(1)"),
        ContainsSubstring("needs a plain distance call"));
    CHECK_THROWS_WITH(
        prep(cat,
             "SELECT k1.value FROM SIMSEARCH IN keyword AS k1, keyword AS k2 "
             "BY simple_edit_distance(k1.value, k1.value) METHOD MessifSimilarityJoin(1)"),
        "pairwise distances take one attribute from each source");
}

TEST_CASE("query objects are checked against the bound distance") {
    Catalog cat = showcase_catalog();
    CHECK_THROWS_AS(prep(cat, "SELECT title FROM SIMSEARCH 'text' IN image BY shape"), BindError);
    CHECK_NOTHROW(prep(cat, "SELECT title FROM SIMSEARCH :queryImage IN image BY shape",
                       showcase_params()));
    // distinctKnn takes a count and an attribute to deduplicate on.
    CHECK_NOTHROW(prep(cat,
                       "SELECT video_id FROM SIMSEARCH :ObamaFace IN video_frame "
                       "BY face_descriptor METHOD distinctKnn(2, video_id)",
                       showcase_params()));
    CHECK_THROWS_AS(prep(cat,
                         "SELECT video_id FROM SIMSEARCH :ObamaFace IN video_frame "
                         "BY face_descriptor METHOD distinctKnn(2, nosuch)",
                         showcase_params()),
                    BindError);
}

TEST_CASE("subqueries can act as query objects") {
    Catalog cat = showcase_catalog();
    CHECK_NOTHROW(prep(cat,
                       "SELECT value FROM SIMSEARCH (SELECT value FROM keyword WHERE id = 1) "
                       "IN keyword BY value"));
}
