#ifndef SIMSEQL_ENGINE_HPP
#define SIMSEQL_ENGINE_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "executor.hpp"
#include "parser.hpp"
#include "planner.hpp"

namespace simseql {

struct QueryResult {
    ExecTable table;
    std::vector<std::string> notices;
};

// Front door: parse, bind, optimize, execute.
class Engine {
public:
    explicit Engine(const Catalog& catalog) : cat_(catalog) {}

    std::shared_ptr<BoundSelect> prepare(std::string_view sql, const ParamBinding& params,
                                         PlannerOptions opts = {}) const {
        ast::SelectStmt stmt = parse_query(sql);
        Binder binder(cat_, params);
        auto bs = binder.bind(stmt);
        Planner planner(cat_, opts);
        planner.optimize(*bs);
        return bs;
    }

    QueryResult run(std::string_view sql, const ParamBinding& params,
                    PlannerOptions opts = {}) const {
        auto bs = prepare(sql, params, opts);
        Executor ex(cat_);
        QueryResult qr;
        qr.table = ex.run(*bs);
        qr.notices = ex.notices();
        return qr;
    }

    std::string explain(std::string_view sql, const ParamBinding& params,
                        PlannerOptions opts = {}) const {
        return explain_text(*prepare(sql, params, opts));
    }

private:
    const Catalog& cat_;
};

}  // namespace simseql

#endif
