#ifndef SIMSEQL_BUILTINS_HPP
#define SIMSEQL_BUILTINS_HPP

#include <string>
#include <vector>

#include "catalog.hpp"
#include "distances.hpp"
#include "extractors.hpp"
#include "methods.hpp"

namespace simseql {

namespace detail {

inline void require_strings(const Value& a, const Value& b, const char* fn) {
    if (a.kind() != ValueKind::String || b.kind() != ValueKind::String)
        throw RuntimeError(std::string(fn) + " expects string operands");
}

inline void require_raster(const Value& v, const char* fn) {
    if (v.kind() != ValueKind::ImageRasterKind)
        throw RuntimeError(std::string(fn) + " expects a binary_image operand");
}

}  // namespace detail

// Registers the built-in data types, functions, methods and index kinds.
inline void bootstrap_catalog(Catalog& c) {
    using V = std::vector<DataTypeId>;
    const DataTypeId t_int{"integer"}, t_long{"long"}, t_str{"string"}, t_date{"date"},
        t_float{"float"}, t_vec{"number_vector"}, t_img{"binary_image"};

    c.register_data_type({"integer", ValueKind::Integer, {}});
    c.register_data_type({"long", ValueKind::Long, {}});
    c.register_data_type({"string", ValueKind::String, {}});
    c.register_data_type({"date", ValueKind::Date, {}});
    c.register_data_type({"float", ValueKind::Float, {}});
    c.register_data_type({"number_vector", ValueKind::NumberVector, {}});
    c.register_data_type({"binary_image", ValueKind::ImageRasterKind, {}});

    auto numeric_cmp = [](const Value& a, const Value& b) {
        double x = a.numeric(), y = b.numeric();
        return x < y ? -1 : (x > y ? 1 : 0);
    };
    c.register_comparison({"compare_integer", t_int, numeric_cmp});
    c.register_comparison({"compare_long", t_long, numeric_cmp});
    c.register_comparison({"compare_date", t_date, numeric_cmp});
    c.register_comparison({"compare_float", t_float, numeric_cmp});
    c.register_comparison({"compare_string", t_str, [](const Value& a, const Value& b) {
                               return a.as_string().compare(b.as_string());
                           }});

    {
        DistanceFunctionEntry e;
        e.name = "identity_distance";
        e.operand_types = V{t_int, t_long, t_str, t_date, t_float, t_vec, t_img};
        e.properties = {{kMetricPostulates, true}};
        e.impl = [](const Value& a, const Value& b, const std::vector<double>&,
                    const DistanceContext&) { return identity_distance(a, b); };
        c.register_distance(std::move(e));
    }
    {
        DistanceFunctionEntry e;
        e.name = "l1_metric";
        e.operand_types = V{t_vec, t_int, t_long, t_date, t_float};
        e.properties = {{kMetricPostulates, true}, {kMonotonicity, true}};
        e.impl = [](const Value& a, const Value& b, const std::vector<double>&,
                    const DistanceContext&) { return l1_distance(a, b); };
        c.register_distance(std::move(e));
    }
    {
        DistanceFunctionEntry e;
        e.name = "l2_metric";
        e.operand_types = V{t_vec};
        e.properties = {{kMetricPostulates, true}, {kMonotonicity, true}};
        e.impl = [](const Value& a, const Value& b, const std::vector<double>&,
                    const DistanceContext&) { return l2_distance(a, b); };
        c.register_distance(std::move(e));
    }
    {
        DistanceFunctionEntry e;
        e.name = "simple_edit_distance";
        e.operand_types = V{t_str};
        e.properties = {{kMetricPostulates, true}};
        e.lower_bounds = {"weighted_edit_distance"};
        e.impl = [](const Value& a, const Value& b, const std::vector<double>&,
                    const DistanceContext&) {
            detail::require_strings(a, b, "simple_edit_distance");
            return double(simple_edit_distance(a.as_string(), b.as_string()));
        };
        c.register_distance(std::move(e));
    }
    {
        DistanceFunctionEntry e;
        e.name = "weighted_edit_distance";
        e.operand_types = V{t_str};
        e.param_count = 3;  // substitute, insert, delete
        e.properties_for = [](const std::vector<double>& w) {
            // Symmetric only when insert and delete cost the same; the triangle
            // inequality additionally needs substitution no dearer than
            // delete-then-insert.
            bool metric = w.size() == 3 && w[1] == w[2] && w[0] <= w[1] + w[2];
            return std::map<std::string, bool>{{kMetricPostulates, metric}};
        };
        e.impl = [](const Value& a, const Value& b, const std::vector<double>& w,
                    const DistanceContext&) {
            detail::require_strings(a, b, "weighted_edit_distance");
            if (w.size() != 3)
                throw RuntimeError("weighted_edit_distance expects 3 weights");
            return weighted_edit_distance(a.as_string(), b.as_string(), w[0], w[1], w[2]);
        };
        c.register_distance(std::move(e));
    }
    {
        DistanceFunctionEntry e;
        e.name = "tf_idf";
        e.operand_types = V{t_str};
        e.properties = {{kMonotonicity, true}};  // not a metric
        e.needs_corpus = true;
        e.impl = [](const Value& a, const Value& b, const std::vector<double>&,
                    const DistanceContext& ctx) {
            detail::require_strings(a, b, "tf_idf");
            return tf_idf_distance(a.as_string(), b.as_string(), ctx.corpus.get());
        };
        c.register_distance(std::move(e));
    }
    for (const char* name :
         {"mpeg7_color_layout_metric", "mpeg7_contour_shape_metric", "mpeg7_face_metric"}) {
        DistanceFunctionEntry e;
        e.name = name;
        e.operand_types = V{t_vec};
        e.properties = {{kMetricPostulates, true}, {kMonotonicity, true}};
        // Weighted Euclidean distance with a flat all-ones weight profile.
        e.impl = [name](const Value& a, const Value& b, const std::vector<double>&,
                        const DistanceContext&) {
            if (a.kind() != ValueKind::NumberVector || b.kind() != ValueKind::NumberVector)
                throw RuntimeError(std::string(name) + " expects number_vector operands");
            return weighted_l2_distance(a.as_vector(), b.as_vector(), {}, name);
        };
        c.register_distance(std::move(e));
    }

    c.register_extractor({"extract_MPEG7_color_layout", t_img, t_vec, [](const Value& v) {
                              detail::require_raster(v, "extract_MPEG7_color_layout");
                              return Value::vector(extract_color_layout(v.as_raster()));
                          }});
    c.register_extractor({"extract_MPEG7_contour_shape", t_img, t_vec, [](const Value& v) {
                              detail::require_raster(v, "extract_MPEG7_contour_shape");
                              return Value::vector(extract_contour_shape(v.as_raster()));
                          }});

    c.register_set_distance({"minimum", set_minimum});
    c.register_aggregated_distance({"weight_sum", weight_sum});

    {
        SearchMethodEntry m;
        m.name = "NN";
        m.impl = method_nn;
        c.register_method(std::move(m));
    }
    {
        SearchMethodEntry m;
        m.name = "rangeQuery";
        m.params = {MethodParamKind::Numeric};
        m.impl = method_range;
        c.register_method(std::move(m));
    }
    {
        SearchMethodEntry m;
        m.name = "MessifRangeQuery";
        m.params = {MethodParamKind::Numeric, MethodParamKind::Numeric};
        m.impl = method_range;
        c.register_method(std::move(m));
    }
    {
        SearchMethodEntry m;
        m.name = "MessifSimilarityJoin";
        m.objects = ObjectCardinality::Zero;
        m.relation_count = 2;
        m.params = {MethodParamKind::Numeric};
        m.pairwise = true;
        m.impl = method_similarity_join;
        c.register_method(std::move(m));
    }
    {
        SearchMethodEntry m;
        m.name = "reverseKnn";
        m.objects = ObjectCardinality::Singleton;
        m.relation_count = 1;
        m.params = {MethodParamKind::Numeric};
        m.needs_self_pairs = true;
        m.impl = method_reverse_knn;
        c.register_method(std::move(m));
    }
    {
        SearchMethodEntry m;
        m.name = "distinctKnn";
        m.params = {MethodParamKind::Numeric, MethodParamKind::Attribute};
        m.impl = method_distinct_knn;
        c.register_method(std::move(m));
    }

    c.register_index_kind({"metric", {kMetricPostulates}, false});
    c.register_index_kind({"ordered", {}, true});
}

inline Catalog make_builtin_catalog() {
    Catalog c;
    bootstrap_catalog(c);
    return c;
}

}  // namespace simseql

#endif
