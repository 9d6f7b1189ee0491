#include "repairlab/cli/cli.hpp"

#include "repairlab/cqa/cqa.hpp"
#include "repairlab/engine.hpp"
#include "repairlab/error.hpp"
#include "repairlab/hypergraph/hypergraph.hpp"
#include "repairlab/oracle/oracle.hpp"
#include "repairlab/reductions/reductions.hpp"
#include "repairlab/repair/repair.hpp"
#include "repairlab/textio/textio.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>

namespace repairlab::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class UsageError : public Error
{
  public:
    using Error::Error;
};

struct RunConfig
{
    std::string schema;
    std::string constraints;
    std::string data;
    std::string candidate;
    std::string query;
    std::string engine = "auto";
    std::uint64_t seed = 0;
    std::size_t oracle_cap = oracle::cap_from_environment();
    bool allow_oracle = false;
    std::string format = "text";
    std::string hypergraph_format = "dot";
    std::string out_dir;

    // repairs
    std::string mode;
    std::size_t limit = 0;

    // generate
    std::string family;
    std::size_t n = 0;
    std::string cnf;
    std::string graph;
    std::size_t universals = 0;
};

void add_format(CLI::App &cmd, RunConfig &cfg)
{
    cmd.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

void add_inputs(CLI::App &cmd, RunConfig &cfg)
{
    cmd.add_option("--schema", cfg.schema, "Schema file")->required();
    cmd.add_option("--constraints", cfg.constraints, "Constraint file")->required();
}

void add_engine(CLI::App &cmd, RunConfig &cfg)
{
    cmd.add_option("--engine", cfg.engine, "Engine")
        ->check(CLI::IsMember({"auto", "denial", "acyclic", "single-key", "oracle"}))
        ->capture_default_str();
    cmd.add_option("--oracle-cap", cfg.oracle_cap, "Largest instance the exhaustive oracle accepts")
        ->capture_default_str();
    cmd.add_flag("--allow-oracle", cfg.allow_oracle, "Fall back to the oracle when no polynomial engine applies");
}

struct Inputs
{
    Schema schema;
    ConstraintSet constraints;
    Instance data;
};

Inputs load(const RunConfig &cfg, bool need_data = true)
{
    Inputs in;
    in.schema = textio::parse_schema(textio::read_file(cfg.schema), cfg.schema);
    in.constraints = textio::parse_constraints(textio::read_file(cfg.constraints), in.schema, cfg.constraints);
    if (need_data)
        in.data = textio::read_instance(cfg.data, in.schema);
    return in;
}

EngineOptions engine_options(const RunConfig &cfg)
{
    EngineOptions o;
    o.engine = *parse_engine(cfg.engine);
    o.allow_oracle = cfg.allow_oracle;
    o.oracle_cap = cfg.oracle_cap;
    return o;
}

Json value_json(const Value &v)
{
    return v.is_number() ? Json(v.as_number()) : Json(v.as_symbol());
}

Json tuple_json(const std::vector<Value> &values)
{
    Json out = Json::array();
    for (const auto &v : values)
        out.push_back(value_json(v));
    return out;
}

Json fact_json(const Fact &f)
{
    return Json{{"relation", f.relation}, {"tuple", tuple_json(f.values)}};
}

Json facts_json(const std::vector<Fact> &facts)
{
    Json out = Json::array();
    for (const auto &f : facts)
        out.push_back(fact_json(f));
    return out;
}

Json facts_json(const Instance &inst) { return facts_json(inst.to_vector()); }

void print_facts(std::ostream &out, const Instance &inst, std::string_view indent = "  ")
{
    for (const auto &f : inst)
        out << indent << f.to_string() << '\n';
}

std::string tuple_text(const std::vector<Value> &values)
{
    std::string s = "(";
    for (std::size_t i = 0; i < values.size(); ++i)
        s += (i ? ", " : "") + values[i].to_literal();
    return s + ")";
}

int cmd_check(const RunConfig &cfg, std::ostream &out)
{
    auto in = load(cfg);
    auto candidate = textio::read_instance(cfg.candidate, in.schema);
    auto verdict = repair::check_dispatch(in.data, candidate, in.constraints, engine_options(cfg));
    if (cfg.format == "json") {
        Json j;
        j["ok"] = verdict.ok;
        j["engine"] = verdict.engine;
        j["justification"] = verdict.justification;
        if (verdict.certificate) {
            const auto &c = *verdict.certificate;
            Json cj;
            cj["kind"] = std::string(repair::to_string(c.kind));
            cj["facts"] = facts_json(c.facts);
            if (!c.constraint.empty())
                cj["constraint"] = c.constraint;
            if (!c.stage.empty())
                cj["stage"] = c.stage;
            j["certificate"] = cj;
        }
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "repair: " << (verdict.ok ? "yes" : "no") << '\n';
    out << "engine: " << verdict.engine << '\n';
    out << "justification: " << verdict.justification << '\n';
    if (verdict.certificate) {
        const auto &c = *verdict.certificate;
        out << "certificate: " << repair::to_string(c.kind) << '\n';
        if (!c.constraint.empty())
            out << "constraint: " << c.constraint << '\n';
        if (!c.stage.empty())
            out << "stage: " << c.stage << '\n';
        for (const auto &f : c.facts)
            out << "  " << f.to_string() << '\n';
    }
    return exit_ok;
}

int cmd_cqa(const RunConfig &cfg, std::ostream &out)
{
    auto in = load(cfg);
    auto query = textio::parse_query(textio::read_file(cfg.query), in.schema, cfg.query);
    auto options = engine_options(cfg);
    if (!is_closed(query)) {
        const auto &cq = std::get<ConjunctiveQuery>(query);
        auto answers = cqa::consistent_answers_open(in.data, in.constraints, cq, options);
        if (cfg.format == "json") {
            Json rows = Json::array();
            for (const auto &a : answers)
                rows.push_back(tuple_json(a));
            out << Json{{"variables", cq.free_variables}, {"answers", rows}}.dump(2) << '\n';
        } else {
            for (const auto &a : answers)
                out << tuple_text(a) << '\n';
        }
        return exit_ok;
    }
    auto verdict = cqa::cqa_dispatch(in.data, in.constraints, query, options);
    if (cfg.format == "json") {
        Json j;
        j["consistent"] = verdict.consistent;
        j["engine"] = verdict.engine;
        j["justification"] = verdict.justification;
        if (verdict.witness)
            j["witness"] = facts_json(*verdict.witness);
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "consistent: " << (verdict.consistent ? "true" : "false") << '\n';
    out << "engine: " << verdict.engine << '\n';
    out << "justification: " << verdict.justification << '\n';
    if (verdict.witness) {
        out << "witness repair:\n";
        print_facts(out, *verdict.witness);
    }
    return exit_ok;
}

int cmd_repairs(const RunConfig &cfg, std::ostream &out)
{
    auto in = load(cfg);
    oracle::RepairSet set;
    if (cfg.mode == "sample") {
        set.repairs.push_back(repair::sample_repair(in.data, in.constraints, cfg.seed));
        set.cap = cfg.oracle_cap;
    } else {
        set = oracle::enumerate_repairs(in.data, in.constraints, cfg.oracle_cap, cfg.limit);
    }
    if (cfg.format == "json") {
        Json j;
        j["mode"] = cfg.mode;
        if (cfg.mode == "sample")
            j["seed"] = cfg.seed;
        else
            j["exhaustive"] = set.exhaustive;
        Json list = Json::array();
        for (const auto &r : set.repairs)
            list.push_back(facts_json(r));
        j["repairs"] = list;
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    for (std::size_t i = 0; i < set.repairs.size(); ++i) {
        out << "repair " << i + 1 << " (" << set.repairs[i].size() << " facts)\n";
        print_facts(out, set.repairs[i]);
    }
    if (cfg.mode == "enumerate")
        out << set.repairs.size() << (set.exhaustive ? " repairs" : " repairs (stopped at the limit)") << '\n';
    return exit_ok;
}

int cmd_hypergraph(const RunConfig &cfg, std::ostream &out)
{
    auto in = load(cfg);
    if (!in.constraints.inds().empty())
        throw UnsupportedError("the conflict hypergraph is defined for denial constraints and FDs only; the "
                               "constraint set contains inclusion dependencies");
    auto h = hypergraph::build(in.data, in.constraints.as_denials());
    out << (cfg.hypergraph_format == "json" ? h.to_json() : h.to_dot());
    return exit_ok;
}

int cmd_classify(const RunConfig &cfg, std::ostream &out)
{
    auto in = load(cfg, false);
    auto graph = ind_graph(in.constraints);
    auto cls = in.constraints.classification();
    if (cfg.format == "json") {
        Json j;
        j["class"] = std::string(to_string(cls));
        j["fds"] = in.constraints.fds().size();
        j["inds"] = in.constraints.inds().size();
        j["denials"] = in.constraints.denials().size();
        j["ind_graph_acyclic"] = graph.acyclic;
        j["single_key"] = satisfies_single_key_conditions(in.constraints);
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << to_string(cls) << '\n';
    return exit_ok;
}

reductions::CnfFormula require_cnf(const RunConfig &cfg)
{
    if (cfg.cnf.empty())
        throw UsageError("family " + cfg.family + " needs --cnf");
    return reductions::parse_cnf(cfg.cnf);
}

reductions::Graph require_graph(const RunConfig &cfg)
{
    if (cfg.graph.empty())
        throw UsageError("family " + cfg.family + " needs --graph");
    return reductions::parse_graph(cfg.graph);
}

reductions::Bundle generate(const RunConfig &cfg)
{
    const auto &f = cfg.family;
    if (f == "monotone3sat")
        return reductions::gen_monotone3sat(require_cnf(cfg));
    if (f == "one-denial")
        return reductions::gen_one_denial(require_cnf(cfg));
    if (f == "fd-ind")
        return reductions::gen_fd_ind_repaircheck(require_cnf(cfg));
    if (f == "keyfk")
        return reductions::gen_keyfk_repaircheck(require_cnf(cfg));
    if (f == "qbf") {
        auto matrix = require_cnf(cfg);
        if (cfg.universals > matrix.variables)
            throw UsageError("--universal exceeds the number of variables in --cnf");
        return reductions::gen_qbf_cqa({cfg.universals, matrix.variables - cfg.universals, std::move(matrix)});
    }
    if (f == "two-key")
        return reductions::gen_two_key(require_graph(cfg));
    if (f == "acyclic-cqa")
        return reductions::gen_acyclic_cqa(reductions::gen_spoiled_free(require_graph(cfg)));
    if (f == "exponential") {
        if (cfg.n == 0)
            throw UsageError("family exponential needs --n of at least 1");
        return reductions::gen_exponential_family(cfg.n);
    }
    if (f == "rc-to-cqa") {
        if (cfg.schema.empty() || cfg.constraints.empty() || cfg.data.empty() || cfg.candidate.empty())
            throw UsageError("family rc-to-cqa needs --schema, --constraints, --data and --candidate");
        auto in = load(cfg);
        auto candidate = textio::read_instance(cfg.candidate, in.schema);
        return reductions::reduce_rc_to_cqa(in.constraints, in.data, candidate);
    }
    throw UsageError("unknown family '" + f + "'");
}

int cmd_generate(const RunConfig &cfg, std::ostream &out)
{
    auto bundle = generate(cfg);
    fs::path dir = cfg.out_dir;
    std::vector<std::string> files;
    auto write = [&](const std::string &name, const std::string &contents) {
        textio::write_file(dir / name, contents);
        files.push_back(name);
    };
    fs::create_directories(dir);
    write("schema.txt", textio::serialize_schema(bundle.schema));
    write("constraints.txt", textio::serialize_constraints(bundle.constraints));
    textio::write_instance_dir(bundle.instance, bundle.schema, dir / "data");
    files.push_back("data/");
    if (bundle.query)
        write("query.txt", textio::serialize_query(*bundle.query));
    if (bundle.candidate) {
        textio::write_instance_dir(*bundle.candidate, bundle.schema, dir / "candidate");
        files.push_back("candidate/");
    }
    auto cls = bundle.constraints.classification();
    if (cfg.format == "json") {
        Json j;
        j["family"] = cfg.family;
        j["facts"] = bundle.instance.size();
        j["class"] = std::string(to_string(cls));
        j["property"] = bundle.property;
        j["files"] = files;
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "family: " << cfg.family << '\n';
    out << "facts: " << bundle.instance.size() << '\n';
    out << "class: " << to_string(cls) << '\n';
    out << "property: " << bundle.property << '\n';
    for (const auto &name : files)
        out << "wrote " << (dir / name).generic_string() << '\n';
    return exit_ok;
}

}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Repair checking and consistent query answering over inconsistent relational instances",
                 "repairlab"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto *check = app.add_subcommand("check", "Decide whether a candidate instance is a repair");
    add_inputs(*check, cfg);
    check->add_option("--data", cfg.data, "Instance (CSV directory, CSV file or JSON bundle)")->required();
    check->add_option("--candidate", cfg.candidate, "Candidate instance")->required();
    add_engine(*check, cfg);
    add_format(*check, cfg);

    auto *cqa = app.add_subcommand("cqa", "Consistent answers to a query");
    add_inputs(*cqa, cfg);
    cqa->add_option("--data", cfg.data, "Instance")->required();
    cqa->add_option("--query", cfg.query, "Query file")->required();
    add_engine(*cqa, cfg);
    add_format(*cqa, cfg);

    auto *repairs = app.add_subcommand("repairs", "Sample or enumerate repairs");
    repairs->add_option("mode", cfg.mode, "sample or enumerate")->required()->check(
        CLI::IsMember({"sample", "enumerate"}));
    add_inputs(*repairs, cfg);
    repairs->add_option("--data", cfg.data, "Instance")->required();
    repairs->add_option("--seed", cfg.seed, "Seed of the sampling order")->capture_default_str();
    repairs->add_option("--limit", cfg.limit, "Stop enumerating after this many repairs (0: all)")
        ->capture_default_str();
    repairs->add_option("--oracle-cap", cfg.oracle_cap, "Largest instance enumeration accepts")
        ->capture_default_str();
    add_format(*repairs, cfg);

    auto *hyper = app.add_subcommand("hypergraph", "Dump the conflict hypergraph");
    add_inputs(*hyper, cfg);
    hyper->add_option("--data", cfg.data, "Instance")->required();
    hyper->add_option("--format", cfg.hypergraph_format, "Output format")->check(CLI::IsMember({"dot", "json"}))
        ->capture_default_str();

    auto *gen = app.add_subcommand("generate", "Write a generated instance bundle");
    gen->add_option("--family", cfg.family, "One of: " + [] {
        std::string s;
        for (const auto &name : reductions::family_names())
            s += (s.empty() ? "" : ", ") + name;
        return s;
    }())->required();
    gen->add_option("--out-dir", cfg.out_dir, "Output directory")->required();
    gen->add_option("--n", cfg.n, "Size parameter");
    gen->add_option("--cnf", cfg.cnf, "CNF as DIMACS literals with 0 after each clause, e.g. \"1 2 0 -1 0\"");
    gen->add_option("--graph", cfg.graph, "Graph as nodes:edges, e.g. \"3:0-1,1-2\"");
    gen->add_option("--universal", cfg.universals, "Number of leading universal variables (qbf)");
    gen->add_option("--schema", cfg.schema, "Schema file (rc-to-cqa)");
    gen->add_option("--constraints", cfg.constraints, "Constraint file (rc-to-cqa)");
    gen->add_option("--data", cfg.data, "Instance (rc-to-cqa)");
    gen->add_option("--candidate", cfg.candidate, "Candidate instance (rc-to-cqa)");
    add_format(*gen, cfg);

    auto *classify_cmd = app.add_subcommand("classify", "Print the constraint class");
    add_inputs(*classify_cmd, cfg);
    add_format(*classify_cmd, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
            return exit_ok;
        }
        err << "error: " << e.what() << "\nrun 'repairlab --help' for usage\n";
        return exit_usage;
    }
    try {
        if (check->parsed())
            return cmd_check(cfg, out);
        if (cqa->parsed())
            return cmd_cqa(cfg, out);
        if (repairs->parsed())
            return cmd_repairs(cfg, out);
        if (hyper->parsed())
            return cmd_hypergraph(cfg, out);
        if (gen->parsed())
            return cmd_generate(cfg, out);
        return cmd_classify(cfg, out);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UnsupportedError &e) {
        err << "unsupported: " << e.what() << '\n';
        return exit_unsupported;
    } catch (const CapExceededError &e) {
        err << "unsupported: " << e.what() << '\n';
        return exit_unsupported;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const fs::filesystem_error &e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
}

}
