// Distance functions, set/aggregated combiners and feature extractors,
// checked against hand-computed values and randomized metric postulates.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <functional>

#include "simseql/builtins.hpp"
#include "simseql/distances.hpp"
#include "simseql/extractors.hpp"

#include "test_support.hpp"

using namespace simseql;
using Catch::Approx;

static Value vec(std::initializer_list<double> v) { return Value::vector(v); }

TEST_CASE("l1 distance over vectors and scalars") {
    CHECK(l1_distance(vec({1, 2}), vec({4, 6})) == 7.0);
    CHECK(l1_distance(vec({0}), vec({0})) == 0.0);
    CHECK(l1_distance(Value::integer(3), Value::integer(10)) == 7.0);
    CHECK(l1_distance(Value::long_int(-5), Value::long_int(5)) == 10.0);
    CHECK(l1_distance(Value::date(10), Value::date(3)) == 7.0);
    CHECK(l1_distance(Value::floating(1.5), Value::floating(1.0)) == 0.5);

    CHECK_THROWS_WITH(l1_distance(vec({1, 2}), vec({1, 2, 3})),
                      "l1_metric: vector dimensions differ (2 vs 3)");
    CHECK_THROWS_WITH(l1_distance(vec({1}), Value::integer(1)),
                      "l1_metric operands differ in type: number_vector vs integer");
    CHECK_THROWS_WITH(l1_distance(Value::string("a"), Value::string("b")),
                      "l1_metric does not accept string");
}

TEST_CASE("l2 distance") {
    CHECK(l2_distance(vec({0, 0}), vec({3, 4})) == 5.0);
    CHECK(l2_distance(vec({1, 1, 1}), vec({1, 1, 1})) == 0.0);
    CHECK(l2_distance(vec({-1}), vec({2})) == 3.0);
    CHECK_THROWS_WITH(l2_distance(Value::integer(1), Value::integer(2)),
                      "l2_metric expects number_vector operands");
}

TEST_CASE("weighted euclidean core") {
    CHECK(weighted_l2_distance({0, 0}, {1, 1}, {4, 1}, "t") == Approx(std::sqrt(5.0)));
    CHECK(weighted_l2_distance({0, 0}, {3, 4}, {}, "t") == 5.0);  // flat profile
    CHECK_THROWS_WITH(weighted_l2_distance({0, 0}, {1, 1}, {1}, "t"),
                      "t: weight profile dimension mismatch");

    // The mpeg7 builtins are flat-weight euclidean distances.
    Catalog cat = make_builtin_catalog();
    test::Rng rng(7);
    for (const char* fn :
         {"mpeg7_color_layout_metric", "mpeg7_contour_shape_metric", "mpeg7_face_metric"}) {
        auto d = cat.bound_distance(cat.require_distance(fn), {});
        for (int i = 0; i < 50; ++i) {
            Value a = Value::vector(rng.vec(6)), b = Value::vector(rng.vec(6));
            CHECK(d(a, b) == Approx(l2_distance(a, b)).margin(1e-12));
        }
    }
}

TEST_CASE("simple edit distance unit values") {
    CHECK(simple_edit_distance("", "") == 0);
    CHECK(simple_edit_distance("abc", "abc") == 0);
    CHECK(simple_edit_distance("", "abc") == 3);
    CHECK(simple_edit_distance("abc", "") == 3);
    CHECK(simple_edit_distance("cat", "cut") == 1);
    CHECK(simple_edit_distance("cat", "cats") == 1);
    CHECK(simple_edit_distance("kitten", "sitting") == 3);
    CHECK(simple_edit_distance("feather", "faether") == 2);
    CHECK(simple_edit_distance("dog", "dot") == 1);
    CHECK(simple_edit_distance("flaw", "lawn") == 2);
}

// Plain quadratic reference, kept independent of the rolling-row production code.
static int64_t reference_edit(const std::string& a, const std::string& b) {
    std::vector<std::vector<int64_t>> dp(a.size() + 1, std::vector<int64_t>(b.size() + 1, 0));
    for (size_t i = 0; i <= a.size(); ++i) dp[i][0] = int64_t(i);
    for (size_t j = 0; j <= b.size(); ++j) dp[0][j] = int64_t(j);
    for (size_t i = 1; i <= a.size(); ++i)
        for (size_t j = 1; j <= b.size(); ++j)
            dp[i][j] = std::min({dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1),
                                 dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    return dp[a.size()][b.size()];
}

TEST_CASE("edit distances agree with a reference matrix on random strings") {
    test::Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        std::string a = rng.word(8, "abcd"), b = rng.word(8, "abcd");
        int64_t want = reference_edit(a, b);
        CHECK(simple_edit_distance(a, b) == want);
        // Unit weights collapse the weighted variant onto the simple one.
        CHECK(weighted_edit_distance(a, b, 1, 1, 1) == double(want));
    }
}

TEST_CASE("weighted edit distance unit values") {
    CHECK(weighted_edit_distance("cat", "cut", 1, 2, 2) == 1.0);
    CHECK(weighted_edit_distance("cat", "cats", 1, 2, 2) == 2.0);
    CHECK(weighted_edit_distance("cat", "cat", 1, 2, 2) == 0.0);
    CHECK(weighted_edit_distance("feather", "faether", 1, 2, 2) == 2.0);

    // Insert and delete price independently: ab -> abc inserts, abc -> ab deletes.
    CHECK(weighted_edit_distance("ab", "abc", 1, 5, 1) == 5.0);
    CHECK(weighted_edit_distance("abc", "ab", 1, 5, 1) == 1.0);

    // A dear substitution is bypassed by delete + insert.
    CHECK(weighted_edit_distance("a", "b", 10, 2, 2) == 4.0);

    CHECK_THROWS_WITH(weighted_edit_distance("a", "b", -1, 1, 1),
                      "weighted_edit_distance: weights must be non-negative");
}

TEST_CASE("simple edit distance lower-bounds the weighted one for weights >= 1") {
    test::Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        std::string a = rng.word(8, "abc"), b = rng.word(8, "abc");
        double ws = rng.real(1, 3), wi = rng.real(1, 3), wd = rng.real(1, 3);
        CHECK(double(simple_edit_distance(a, b)) <= weighted_edit_distance(a, b, ws, wi, wd) + 1e-9);
    }
    Catalog cat = make_builtin_catalog();
    const auto& simple = cat.require_distance("simple_edit_distance");
    CHECK(simple.lower_bounds == std::vector<std::string>{"weighted_edit_distance"});
}

TEST_CASE("identity distance") {
    CHECK(identity_distance(Value::string("x"), Value::string("x")) == 0.0);
    CHECK(identity_distance(Value::string("x"), Value::string("y")) == kInfinity);
    CHECK(identity_distance(vec({1, 2}), vec({1, 2})) == 0.0);
    CHECK(identity_distance(Value::integer(1), Value::integer(2)) == kInfinity);
    CHECK_THROWS_WITH(identity_distance(Value::integer(1), Value::long_int(1)),
                      "identity distance operands differ in type: integer vs long");
}

TEST_CASE("tf-idf distance degenerates without a corpus") {
    CHECK(tf_idf_distance("same words", "same words", nullptr) == 0.0);
    CHECK(tf_idf_distance("alpha", "beta", nullptr) == 1.0);
    CHECK(tf_idf_distance("alpha beta", "beta alpha", nullptr) == 1.0);  // zero idf weights
}

TEST_CASE("tf-idf distance ranks by shared weighted terms") {
    TextCorpus corpus;
    corpus.add_document("vulcano eruption video");
    corpus.add_document("beach holiday");
    corpus.add_document("vulcano hike report");
    corpus.add_document("city traffic");
    corpus.add_document("mountain vulcano");
    corpus.add_document("quiet beach");

    double near = tf_idf_distance("vulcano", "vulcano eruption video", &corpus);
    double far = tf_idf_distance("vulcano", "beach holiday", &corpus);
    CHECK(near < far);
    CHECK(far == 1.0);
    CHECK(near > 0.0);
    CHECK(near < 1.0);
    // Tokenization folds case and punctuation, so these are the same document.
    CHECK(tf_idf_distance("vulcano", "VULCANO!", &corpus) < 1e-12);
}

TEST_CASE("tf-idf violates the triangle inequality") {
    TextCorpus corpus;
    corpus.add_document("x a");
    corpus.add_document("y a");
    corpus.add_document("z c");
    corpus.add_document("w d");

    double ab = tf_idf_distance("x", "y", &corpus);
    double ac = tf_idf_distance("x", "x y", &corpus);
    double cb = tf_idf_distance("x y", "y", &corpus);
    CHECK(ab == 1.0);
    CHECK(ac == Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ac + cb < ab);  // the postulate fails, hence no metric declaration

    Catalog cat = make_builtin_catalog();
    CHECK_FALSE(cat.require_distance("tf_idf").has_property(kMetricPostulates, {}));
}

TEST_CASE("set minimum") {
    CHECK(set_minimum({3.0, 1.0}) == 1.0);
    CHECK(set_minimum({5.0}) == 5.0);
    CHECK(set_minimum({kInfinity, 2.0}) == 2.0);
    CHECK_THROWS_WITH(set_minimum({}), "set distance 'minimum' needs at least one element distance");
}

TEST_CASE("weight sum") {
    CHECK(weight_sum({{2.0, 0.7}, {5.0, 0.2}}) == Approx(2.4).margin(1e-12));
    CHECK(weight_sum({}) == 0.0);
    CHECK(weight_sum({{kInfinity, 0.0}, {3.0, 1.0}}) == 3.0);  // zero weight drops its part
    CHECK(weight_sum({{kInfinity, 0.5}}) == kInfinity);
    CHECK_THROWS_WITH(weight_sum({{1.0, -0.1}}), "weight_sum: weights must be non-negative");
}

// --- extractors ---------------------------------------------------------------

static ImageRaster make_raster(int w, int h,
                               const std::function<std::array<uint8_t, 3>(int, int)>& px) {
    ImageRaster img;
    img.width = w;
    img.height = h;
    img.rgb.resize(size_t(3) * w * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto c = px(x, y);
            size_t off = 3 * (size_t(y) * w + x);
            img.rgb[off] = c[0];
            img.rgb[off + 1] = c[1];
            img.rgb[off + 2] = c[2];
        }
    return img;
}

TEST_CASE("color layout averages each quadrant") {
    // Four uniform 2x2 quadrants: the grid reproduces the colors exactly.
    auto img = make_raster(4, 4, [](int x, int y) -> std::array<uint8_t, 3> {
        if (y < 2) return x < 2 ? std::array<uint8_t, 3>{255, 0, 0} : std::array<uint8_t, 3>{0, 255, 0};
        return x < 2 ? std::array<uint8_t, 3>{0, 0, 255} : std::array<uint8_t, 3>{128, 128, 128};
    });
    CHECK(extract_color_layout(img) ==
          std::vector<double>{255, 0, 0, 0, 255, 0, 0, 0, 255, 128, 128, 128});
}

TEST_CASE("color layout of a single pixel fills only the first cell") {
    auto img = make_raster(1, 1, [](int, int) { return std::array<uint8_t, 3>{10, 20, 30}; });
    CHECK(extract_color_layout(img) == std::vector<double>{10, 20, 30, 0, 0, 0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("color layout averages within a cell") {
    // 2x1: both pixels land in the top row cells (one per cell).
    auto img = make_raster(2, 2, [](int x, int y) {
        return std::array<uint8_t, 3>{uint8_t(10 * (1 + x + 2 * y)), 0, 0};
    });
    // Each pixel is its own cell here; use 4x2 to average two pixels per cell.
    auto wide = make_raster(4, 2, [](int x, int y) {
        (void)y;
        return std::array<uint8_t, 3>{uint8_t(x < 2 ? (x == 0 ? 10 : 30) : (x == 2 ? 100 : 200)),
                                      0, 0};
    });
    auto out = extract_color_layout(wide);
    CHECK(out[0] == 20.0);   // mean of 10 and 30, top-left cell (both rows identical)
    CHECK(out[3] == 150.0);  // mean of 100 and 200
    CHECK(extract_color_layout(img).size() == 12);
}

TEST_CASE("extractors reject an empty raster") {
    CHECK_THROWS_WITH(extract_color_layout(ImageRaster{}), "extract_MPEG7_color_layout: empty raster");
    CHECK_THROWS_WITH(extract_contour_shape(ImageRaster{}),
                      "extract_MPEG7_contour_shape: empty raster");
}

TEST_CASE("contour shape of an all-dark image is the zero vector") {
    auto img = make_raster(3, 3, [](int, int) { return std::array<uint8_t, 3>{10, 10, 10}; });
    CHECK(extract_contour_shape(img) == std::vector<double>(16, 0.0));
}

TEST_CASE("contour shape of a single foreground pixel peaks at the zero angle bin") {
    auto img = make_raster(3, 3, [](int x, int y) {
        return x == 1 && y == 1 ? std::array<uint8_t, 3>{255, 255, 255}
                                : std::array<uint8_t, 3>{0, 0, 0};
    });
    std::vector<double> want(16, 0.0);
    want[8] = 1.0;  // atan2(0, 0) == 0 maps to the middle bin
    CHECK(extract_contour_shape(img) == want);
}

TEST_CASE("contour shape of a bright 2x2 square spreads over the four diagonals") {
    auto img = make_raster(2, 2, [](int, int) { return std::array<uint8_t, 3>{200, 200, 200}; });
    auto hist = extract_contour_shape(img);
    CHECK(hist[2] == 0.25);
    CHECK(hist[6] == 0.25);
    CHECK(hist[10] == 0.25);
    CHECK(hist[14] == 0.25);
    double sum = 0;
    for (double h : hist) sum += h;
    CHECK(sum == Approx(1.0).margin(1e-12));
}

TEST_CASE("contour histograms of random images are normalized") {
    test::Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        int w = int(rng.between(1, 12)), h = int(rng.between(1, 12));
        auto img = make_raster(w, h, [&](int, int) {
            uint8_t v = uint8_t(rng.up_to(256));
            return std::array<uint8_t, 3>{v, v, v};
        });
        auto hist = extract_contour_shape(img);
        REQUIRE(hist.size() == 16);
        double sum = 0;
        bool fg = false;
        for (double x : hist) {
            CHECK(x >= 0.0);
            sum += x;
            fg = fg || x > 0;
        }
        if (fg) CHECK(sum == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("catalog extractor entries validate their operand kind") {
    Catalog cat = make_builtin_catalog();
    const auto* e = cat.find_extractor("extract_MPEG7_color_layout");
    REQUIRE(e != nullptr);
    CHECK(e->input_type == DataTypeId{"binary_image"});
    CHECK(e->output_type == DataTypeId{"number_vector"});

    auto img = make_raster(1, 1, [](int, int) { return std::array<uint8_t, 3>{9, 9, 9}; });
    Value out = e->impl(Value::raster(img));
    CHECK(out.kind() == ValueKind::NumberVector);
    CHECK(out.as_vector()[0] == 9.0);
    CHECK_THROWS_WITH(e->impl(Value::string("x")),
                      "extract_MPEG7_color_layout expects a binary_image operand");
}

// --- metric postulates, randomized -------------------------------------------

static void check_metric(const std::function<double(const Value&, const Value&)>& d,
                         const std::function<Value(test::Rng&)>& gen, uint64_t seed,
                         int triples = 300, double tol = 1e-9) {
    test::Rng rng(seed);
    for (int i = 0; i < triples; ++i) {
        Value x = gen(rng), y = gen(rng), z = gen(rng);
        double xy = d(x, y), yx = d(y, x), xz = d(x, z), yz = d(y, z), xx = d(x, x);
        CHECK(xx <= tol);
        CHECK(xy >= 0.0);
        if (std::isinf(xy))
            CHECK(std::isinf(yx));
        else
            CHECK(std::fabs(xy - yx) <= tol);
        double lhs = xz, rhs = xy + yz;
        if (!std::isinf(rhs)) CHECK(lhs <= rhs + tol);
    }
}

TEST_CASE("declared metric builtins satisfy the postulates on random data") {
    Catalog cat = make_builtin_catalog();
    auto vec_gen = [](test::Rng& r) { return Value::vector(r.vec(4)); };
    auto str_gen = [](test::Rng& r) { return Value::string(r.word(8, "abc")); };

    check_metric(cat.bound_distance(cat.require_distance("l1_metric"), {}), vec_gen, 101);
    check_metric(cat.bound_distance(cat.require_distance("l2_metric"), {}), vec_gen, 102);
    check_metric(cat.bound_distance(cat.require_distance("mpeg7_color_layout_metric"), {}), vec_gen,
                 103);
    check_metric(cat.bound_distance(cat.require_distance("simple_edit_distance"), {}), str_gen,
                 104);
    check_metric(cat.bound_distance(cat.require_distance("weighted_edit_distance"), {1, 2, 2}),
                 str_gen, 105);
    check_metric(cat.bound_distance(cat.require_distance("identity_distance"), {}), str_gen, 106);
}

TEST_CASE("weighted edit cost declarations depend on the bound weights") {
    Catalog cat = make_builtin_catalog();
    const auto& w = cat.require_distance("weighted_edit_distance");
    CHECK(w.has_property(kMetricPostulates, {1, 2, 2}));
    CHECK(w.has_property(kMetricPostulates, {1, 1, 1}));
    CHECK_FALSE(w.has_property(kMetricPostulates, {1, 2, 3}));  // asymmetric costs
    CHECK_FALSE(w.has_property(kMetricPostulates, {5, 2, 2}));  // substitution too dear
}
