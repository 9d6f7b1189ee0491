#include "soundness.hpp"

#include "repairlab/oracle/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

namespace support {

namespace {

using reductions::Bundle;

/// Runs `check` on every input; it returns a description when the property fails.
template<class In>
FamilyReport run_family(const std::string &family, const std::vector<In> &inputs,
                        const std::function<std::optional<std::string>(const In &, std::size_t &)> &check)
{
    FamilyReport report{family};
    auto start = std::chrono::steady_clock::now();
    for (const auto &in : inputs) {
        std::size_t facts = 0;
        std::optional<std::string> failure;
        try {
            failure = check(in, facts);
        } catch (const std::exception &e) {
            failure = std::string("exception: ") + e.what();
        }
        ++report.cases;
        report.largest_instance = std::max(report.largest_instance, facts);
        if (failure) {
            if (report.failures == 0)
                report.first_failure = *failure;
            ++report.failures;
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::optional<std::string> structural(const Bundle &b, ConstraintClass expected)
{
    typecheck(b.instance, b.schema);
    if (b.constraints.classification() != expected)
        return "class " + std::string(to_string(b.constraints.classification())) + ", expected " +
               std::string(to_string(expected));
    return std::nullopt;
}

std::optional<std::string> mismatch(const std::string &input, bool lhs, bool rhs, const std::string &what)
{
    if (lhs == rhs)
        return std::nullopt;
    std::ostringstream out;
    out << input << ": " << what << " (" << lhs << " vs " << rhs << ")";
    return out.str();
}

std::string describe(const reductions::Qbf2 &q)
{
    return "forall 1.." + std::to_string(q.universals) + " exists " + std::to_string(q.existentials) + ": " +
           q.matrix.to_string();
}

std::string describe(const reductions::Graph &g)
{
    std::string out = std::to_string(g.nodes) + ":";
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        out += (i ? "," : "") + std::to_string(g.edges[i].first) + "-" + std::to_string(g.edges[i].second);
    return out;
}

bool empty_candidate_is_repair(const Bundle &b)
{
    return oracle::oracle_repair_check(b.instance, b.candidate.value(), b.constraints, generated_cap);
}

}

std::string FamilyReport::summary() const
{
    std::ostringstream out;
    out << family << ": " << (cases - failures) << "/" << cases << " cases hold, largest instance "
        << largest_instance << " facts, " << static_cast<long>(seconds * 1000) << " ms";
    if (failures)
        out << "; first failure: " << first_failure;
    return out.str();
}

bool consistently_true_monotone(const Instance &r, const ConstraintSet &ics, const Query &query, std::size_t cap)
{
    bool falsified = false;
    oracle::for_each_repair(
        r, ics, cap,
        [&](const Instance &repair) {
            falsified = !evaluate(query, repair);
            return !falsified;
        },
        [&](const Instance &committed) { return evaluate(query, committed); });
    return !falsified;
}

std::vector<reductions::CnfFormula> cnf_envelope(std::size_t max_variables, std::size_t max_clauses)
{
    std::vector<reductions::CnfFormula> out;
    for (std::size_t v = 1; v <= max_variables; ++v)
        for (auto &f : all_cnfs(v, max_clauses))
            out.push_back(std::move(f));
    return out;
}

std::vector<reductions::Qbf2> qbf_envelope(std::size_t max_variables, std::size_t max_clauses)
{
    std::vector<reductions::Qbf2> out;
    for (const auto &f : cnf_envelope(max_variables, max_clauses))
        for (std::size_t k = 0; k <= f.variables; ++k)
            out.push_back(reductions::Qbf2{k, f.variables - k, f});
    return out;
}

std::vector<reductions::Graph> graph_envelope(std::size_t max_nodes)
{
    std::vector<reductions::Graph> out;
    for (std::size_t n = 0; n <= max_nodes; ++n)
        for (auto &g : all_graphs(n))
            out.push_back(std::move(g));
    return out;
}

std::vector<reductions::CnfFormula> restricted_envelope(std::size_t variables)
{
    std::vector<reductions::CnfFormula> out;
    for (auto &f : all_cnfs(variables, variables))
        if (f.clauses.size() == variables && f.restricted())
            out.push_back(std::move(f));
    return out;
}

FamilyReport check_monotone3sat(const std::vector<reductions::CnfFormula> &inputs)
{
    std::vector<reductions::CnfFormula> monotone;
    std::copy_if(inputs.begin(), inputs.end(), std::back_inserter(monotone),
                 [](const auto &f) { return f.monotone_partitioned(); });
    return run_family<reductions::CnfFormula>(
        "monotone3sat", monotone, [](const reductions::CnfFormula &f, std::size_t &facts) {
            auto b = reductions::gen_monotone3sat(f);
            facts = b.instance.size();
            if (auto s = structural(b, ConstraintClass::FdsOnly))
                return s;
            return mismatch(f.to_string(), satisfiable(f),
                            !consistently_true_monotone(b.instance, b.constraints, *b.query),
                            "satisfiable vs query not consistently true");
        });
}

FamilyReport check_one_denial(const std::vector<reductions::CnfFormula> &inputs)
{
    return run_family<reductions::CnfFormula>(
        "one-denial", inputs, [](const reductions::CnfFormula &f, std::size_t &facts) {
            auto b = reductions::gen_one_denial(f);
            facts = b.instance.size();
            if (auto s = structural(b, ConstraintClass::DenialOnly))
                return s;
            return mismatch(f.to_string(), satisfiable(f),
                            !consistently_true_monotone(b.instance, b.constraints, *b.query),
                            "satisfiable vs query not consistently true");
        });
}

FamilyReport check_fd_ind(const std::vector<reductions::CnfFormula> &inputs)
{
    return run_family<reductions::CnfFormula>(
        "fd-ind", inputs, [](const reductions::CnfFormula &f, std::size_t &facts) {
            auto b = reductions::gen_fd_ind_repaircheck(f);
            facts = b.instance.size();
            if (auto s = structural(b, ConstraintClass::General))
                return s;
            return mismatch(f.to_string(), !satisfiable(f), empty_candidate_is_repair(b),
                            "unsatisfiable vs empty instance is a repair");
        });
}

FamilyReport check_keyfk(const std::vector<reductions::CnfFormula> &inputs)
{
    return run_family<reductions::CnfFormula>(
        "keyfk", inputs, [](const reductions::CnfFormula &f, std::size_t &facts) {
            auto b = reductions::gen_keyfk_repaircheck(f);
            facts = b.instance.size();
            if (auto s = structural(b, ConstraintClass::General))
                return s;
            return mismatch(f.to_string(), !satisfiable(f), empty_candidate_is_repair(b),
                            "unsatisfiable vs empty instance is a repair");
        });
}

FamilyReport check_qbf(const std::vector<reductions::Qbf2> &inputs)
{
    return run_family<reductions::Qbf2>("qbf", inputs, [](const reductions::Qbf2 &q, std::size_t &facts) {
        auto b = reductions::gen_qbf_cqa(q);
        facts = b.instance.size();
        if (auto s = structural(b, ConstraintClass::General))
            return s;
        return mismatch(describe(q), qbf_true(q), consistently_true_monotone(b.instance, b.constraints, *b.query),
                        "QBF true vs query consistently true");
    });
}

FamilyReport check_two_key(const std::vector<reductions::Graph> &inputs)
{
    return run_family<reductions::Graph>("two-key", inputs, [](const reductions::Graph &g, std::size_t &facts) {
        auto b = reductions::gen_two_key(g);
        facts = b.instance.size();
        if (auto s = structural(b, ConstraintClass::FdsOnly))
            return s;
        return mismatch(describe(g), three_colorable(g),
                        !consistently_true_monotone(b.instance, b.constraints, *b.query),
                        "3-colorable vs query not consistently true");
    });
}

FamilyReport check_acyclic_cqa(const std::vector<reductions::Graph> &inputs)
{
    return run_family<reductions::Graph>("acyclic-cqa", inputs, [](const reductions::Graph &g, std::size_t &facts) {
        auto b = reductions::gen_acyclic_cqa(reductions::gen_spoiled_free(g));
        facts = b.instance.size();
        if (auto s = structural(b, ConstraintClass::AcyclicFdInd))
            return s;
        return mismatch(describe(g), three_colorable(g),
                        !consistently_true_monotone(b.instance, b.constraints, *b.query),
                        "3-colorable vs query not consistently true");
    });
}

FamilyReport check_rc_to_cqa()
{
    auto fx = load_fixture("person");
    struct Case
    {
        std::string name;
        Instance candidate;
    };
    std::vector<Case> cases{
        {"repair1", load_instance("person", "repair1", fx.schema)},
        {"repair2", load_instance("person", "repair2", fx.schema)},
        {"candidate", load_instance("person", "candidate", fx.schema)},
        {"single Brown fact", Instance{fact("Person", {sym("Brown"), sym("Amherst"), sym("115 Klein")})}},
    };
    return run_family<Case>("rc-to-cqa", cases, [&](const Case &c, std::size_t &facts) {
        auto b = reductions::reduce_rc_to_cqa(fx.constraints, fx.data, c.candidate);
        facts = b.instance.size();
        if (auto s = structural(b, ConstraintClass::AcyclicFdInd))
            return s;
        bool not_repair = !oracle::oracle_repair_check(fx.data, c.candidate, fx.constraints);
        return mismatch(c.name, not_repair, consistently_true_monotone(b.instance, b.constraints, *b.query),
                        "not a repair vs query consistently true");
    });
}

}
