// Command-line front end: decide path conditions on finite idempotent
// algebras, cross-check with the free-algebra oracle, print condition
// equations, validate input files, and benchmark the instance scan.
//
// Machine-readable JSON goes to stdout, human-readable summaries to stderr.
// Exit codes: 0 success, 2 invalid input, 3 algebra not idempotent,
// 4 closure or scan cap exceeded.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathcond/pathcond.hpp"

namespace {

using namespace pathcond;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::NotIdempotent: return 3;
        case ErrorKind::CapExceeded: return 4;
        default: return 2;
    }
}

struct CommonArgs {
    std::string algebra_file;
    std::vector<std::string> algebra_files;  // bench accepts several
    std::vector<std::string> conditions;
    bool canonical = false;
    int workers = 1;
    std::uint64_t cap = ClosureLimits{}.max_elements;
    std::uint64_t step_budget = ClosureLimits{}.max_steps;
    bool emit_terms = false;

    ClosureLimits limits() const { return {cap, step_budget}; }
};

void add_algebra_flag(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--algebra", args.algebra_file, "algebra JSON file")->required();
}

void add_condition_flag(CLI::App* cmd, CommonArgs& args, bool multiple) {
    auto* opt = cmd->add_option("--condition", args.conditions,
                                "condition spec: <name>, <name>:<n>, or path:<DSL>");
    opt->required();
    if (!multiple) opt->expected(1);
}

void add_tuning_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_flag("--canonical", args.canonical,
                  "deterministic output: lexicographically least counterexample, "
                  "worker-independent bytes");
    cmd->add_option("--workers", args.workers, "worker threads for the instance scan")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--cap", args.cap, "closure element cap");
    cmd->add_option("--step-budget", args.step_budget, "closure step budget");
}

int cmd_check(const CommonArgs& args) {
    Algebra a = load_algebra(args.algebra_file);
    ConditionSpec spec = parse_condition_spec(args.conditions.at(0));
    Decider decider(a, args.limits());
    DecideOptions opt;
    opt.canonical = args.canonical;
    opt.workers = args.workers;
    opt.condition_name = spec.display;
    DecisionReport report = decider.decide(spec.path, opt);
    std::cout << report_to_json(report).dump(2) << "\n";
    std::cerr << (a.name().empty() ? args.algebra_file : a.name()) << " | " << spec.display
              << " -> " << to_string(report.verdict) << " (" << report.stats.instances_checked
              << " instances)\n";
    return 0;
}

int cmd_oracle(const CommonArgs& args) {
    Algebra a = load_algebra(args.algebra_file);
    ConditionSpec spec = parse_condition_spec(args.conditions.at(0));
    Oracle oracle(a, args.limits());
    OracleDecision d = oracle.decide(spec.path);
    Json out;
    out["condition"] = spec.display;
    out["verdict"] = d.verdict == OracleVerdict::Satisfied ? "satisfied" : "refuted";
    if (args.emit_terms && d.verdict == OracleVerdict::Satisfied) {
        WitnessTerms w = oracle.extract_witness_terms(spec.path);
        WitnessReport check = verify_witness(a, spec.path, w);
        if (!check.valid) {
            std::cerr << "internal error: extracted witness failed verification\n";
            return 1;
        }
        out["witness"] = witness_to_json(w);
    } else {
        out["witness"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
    std::cerr << (a.name().empty() ? args.algebra_file : a.name()) << " | " << spec.display
              << " -> " << out["verdict"].get<std::string>() << " (oracle)\n";
    return 0;
}

int cmd_emit(const CommonArgs& args, bool raw, bool reduced) {
    ConditionSpec spec = parse_condition_spec(args.conditions.at(0));
    EquationSystem sys;
    if (reduced)
        sys = reduce_equations(spec.path);
    else
        sys = emit_maltsev_condition(spec.path, {.substitute_endpoints = !raw});
    std::cout << sys.to_string();
    std::cerr << spec.display << ": " << sys.equations.size() << " equations\n";
    return 0;
}

int cmd_validate(const CommonArgs& args) {
    Algebra a = load_algebra(args.algebra_file);
    auto idem = is_idempotent(a);
    SizeMeasure measure = size_measure(a);
    Json out;
    out["valid"] = true;
    out["size"] = a.size();
    if (!a.name().empty()) out["name"] = a.name();
    out["operations"] = a.operation_count();
    out["max_arity"] = measure.max_arity;
    out["size_measure"] = measure.value;
    out["idempotent"] = idem.idempotent;
    if (!idem.idempotent) {
        Json v = Json::array();
        for (const auto& viol : idem.violations)
            v.push_back({{"operation", a.operation(viol.op_index).name}, {"element", viol.element}});
        out["idempotence_violations"] = v;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_bench(const CommonArgs& args) {
    Json rows = Json::array();
    std::cerr << "algebra | condition | n | k | theoretical | observed | verdict | wall_ms\n";
    for (const auto& file : args.algebra_files) {
        Algebra a = load_algebra(file);
        SizeMeasure measure = size_measure(a);
        Decider decider(a, args.limits());
        for (const auto& cond : args.conditions) {
            ConditionSpec spec = parse_condition_spec(cond);
            DecideOptions opt;
            opt.canonical = args.canonical;
            opt.exhaustive = true;  // counts are the point of bench
            opt.workers = args.workers;
            opt.condition_name = spec.display;
            DecisionReport r = decider.decide(spec.path, opt);
            const int n = spec.path.length();
            const int k = spec.path.solid_count();
            // Scan cost bound: instances times one digraph build, which is
            // r*||A||^3 per instance with solid edges and r*||A||^2 without.
            double bound = static_cast<double>(measure.max_arity) *
                           std::pow(static_cast<double>(a.size()), 2 * n + 2 * k + 2) *
                           std::pow(static_cast<double>(measure.value), k > 0 ? 3 : 2);
            Json row;
            row["algebra"] = a.name().empty() ? file : a.name();
            row["condition"] = spec.display;
            row["n"] = n;
            row["k"] = k;
            row["size_measure"] = measure.value;
            row["theoretical_instances"] = r.stats.theoretical_instances;
            row["observed_instances"] = r.stats.instances_checked;
            row["cost_bound"] = bound;
            row["verdict"] = to_string(r.verdict);
            if (!args.canonical) {
                row["closures_computed"] = r.stats.closures_computed;
                row["cache_hits"] = r.stats.cache_hits;
                row["wall_ms"] = r.stats.wall_ms;
            }
            rows.push_back(row);
            std::cerr << row["algebra"].get<std::string>() << " | " << spec.display << " | " << n
                      << " | " << k << " | " << r.stats.theoretical_instances << " | "
                      << r.stats.instances_checked << " | " << to_string(r.verdict) << " | "
                      << r.stats.wall_ms << "\n";
        }
    }
    std::cout << rows.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"decide path-expressible Maltsev conditions on finite idempotent algebras"};
    app.require_subcommand(1);

    CommonArgs args;
    bool raw = false, reduced = false;

    CLI::App* check = app.add_subcommand("check", "polynomial local decision with certificate");
    add_algebra_flag(check, args);
    add_condition_flag(check, args, false);
    add_tuning_flags(check, args);

    CLI::App* oracle = app.add_subcommand("oracle", "exponential free-algebra cross-check");
    add_algebra_flag(oracle, args);
    add_condition_flag(oracle, args, false);
    add_tuning_flags(oracle, args);
    oracle->add_flag("--emit-terms", args.emit_terms, "extract and verify witness terms");

    CLI::App* emit = app.add_subcommand("emit", "print the equations of a condition");
    add_condition_flag(emit, args, false);
    emit->add_flag("--raw", raw, "keep the s0/sn endpoint symbols");
    emit->add_flag("--reduced", reduced, "eliminate intermediate binary symbols");

    CLI::App* validate = app.add_subcommand("validate", "check an algebra file");
    add_algebra_flag(validate, args);

    CLI::App* bench = app.add_subcommand("bench", "exhaustive scans with instance accounting");
    bench->add_option("--algebra", args.algebra_files, "algebra JSON file (repeatable)")->required();
    add_condition_flag(bench, args, true);
    add_tuning_flags(bench, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits clean; bad usage is invalid input
    }

    try {
        if (app.got_subcommand(check)) return cmd_check(args);
        if (app.got_subcommand(oracle)) return cmd_oracle(args);
        if (app.got_subcommand(emit)) return cmd_emit(args, raw, reduced);
        if (app.got_subcommand(validate)) return cmd_validate(args);
        if (app.got_subcommand(bench)) return cmd_bench(args);
    } catch (const pathcond::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
