#pragma once

// Command-line front end. Exit codes: 0 yes / valid, 1 no / invalid, 2 input error.

#include <CLI11.hpp>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "check.hpp"
#include "constraints.hpp"
#include "engine.hpp"
#include "problem_file.hpp"
#include "proof_json.hpp"
#include "translate.hpp"

namespace intruder::cli {

inline constexpr int exit_yes = 0;
inline constexpr int exit_no = 1;
inline constexpr int exit_input = 2;

struct DeduceArgs {
    std::string input;
    std::vector<std::string> theories;
    std::string emit = "text";
    std::string system = "L";
    bool quiet = false;
};

struct ConstraintArgs {
    std::string input;
    bool all = false;
    std::string emit = "text";
    std::string strategy = "first-unsolved";
    std::size_t workers = 1;
};

struct ProofArgs {
    std::string proof;
    std::vector<std::string> theories;
    std::string direction;
};

inline int cmd_deduce(const DeduceArgs& a, std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
    DeduceProblem p;
    Combination e;
    try {
        p = parse_deduce_problem(read_file(a.input));
        e = combination_from_names(a.theories.empty() ? p.theories : a.theories);
        for (Term t : p.knows) e.check_term(t);
        e.check_term(p.goal);
    } catch (const Error& ex) {
        err << a.input << ":" << ex.what() << "\n";
        return exit_input;
    }
    Engine engine(e);
    TermSet gamma(p.knows.begin(), p.knows.end());
    DeduceOptions opts;
    opts.seed = seed;
    DeduceResult r = engine.deduce(gamma, p.goal, opts);
    if (!r.derivable()) {
        if (!a.quiet) out << "not derivable: " << sequent_string(r.gamma, r.goal) << "\n";
        return exit_no;
    }
    Derivation proof = a.system == "S" ? l_to_s(*r.proof, &engine) : *r.proof;
    if (auto c = Checker(e).check(proof); !c) {
        err << "internal error: emitted proof does not check (" << c.describe() << ")\n";
        return exit_input;
    }
    if (a.quiet) return exit_yes;
    if (a.emit == "json")
        out << to_json(proof).dump(2) << "\n";
    else
        out << "derivable: " << sequent_string(r.gamma, r.goal) << "\n" << to_text(proof);
    return exit_yes;
}

inline nlohmann::json solution_json(const Substitution& s) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [x, t] : s.bindings()) j[to_string(x)] = to_string(t);
    return j;
}

inline int cmd_constraints(const ConstraintArgs& a, std::ostream& out, std::ostream& err) {
    ConstraintSystem c;
    try {
        c = parse_constraint_system(read_file(a.input));
    } catch (const Error& ex) {
        err << a.input << ":" << ex.what() << "\n";
        return exit_input;
    }
    if (auto w = check_input(c); !w) {
        err << a.input << ": ill-formed constraint system: " << w.message << "\n";
        return exit_input;
    }
    SolveOptions opts;
    opts.strategy = a.strategy == "exhaustive" ? SearchStrategy::Exhaustive : SearchStrategy::FirstUnsolved;
    opts.first_only = !a.all;
    opts.workers = a.workers;
    SolveResult r = solve(c, opts);
    if (r.truncated) {
        err << "search truncated after " << r.nodes << " nodes\n";
        return exit_input;
    }
    std::vector<Substitution> sols;
    for (const SolvedForm& s : r.solutions) {
        Substitution theta = extract_solution(s.sigma, c);
        if (!verify_solution(c, theta)) {
            err << "internal error: extracted solution " << to_string(theta) << " does not verify\n";
            return exit_input;
        }
        if (std::find(sols.begin(), sols.end(), theta) == sols.end()) sols.push_back(theta);
    }
    std::sort(sols.begin(), sols.end());
    if (a.emit == "json") {
        nlohmann::json j;
        j["satisfiable"] = !sols.empty();
        j["solutions"] = nlohmann::json::array();
        for (const Substitution& s : sols) j["solutions"].push_back(solution_json(s));
        j["nodes"] = r.nodes;
        out << j.dump(2) << "\n";
    } else if (sols.empty()) {
        out << "unsatisfiable\n";
    } else {
        out << "satisfiable\n";
        for (const Substitution& s : sols) out << to_string(s) << "\n";
    }
    return sols.empty() ? exit_no : exit_yes;
}

inline int load_proof(const ProofArgs& a, Derivation& d, Combination& e, std::ostream& err) {
    try {
        e = combination_from_names(a.theories);
        d = parse_proof(read_file(a.proof));
    } catch (const Error& ex) {
        err << a.proof << ": " << ex.what() << "\n";
        return exit_input;
    }
    return exit_yes;
}

inline int cmd_check(const ProofArgs& a, std::ostream& out, std::ostream& err) {
    Derivation d;
    Combination e;
    if (int rc = load_proof(a, d, e, err)) return rc;
    CheckResult c = Checker(e).check(d);
    out << (c ? "valid" : "invalid " + c.describe()) << "\n";
    return c ? exit_yes : exit_no;
}

inline int cmd_translate(const ProofArgs& a, std::ostream& out, std::ostream& err) {
    Derivation d;
    Combination e;
    if (int rc = load_proof(a, d, e, err)) return rc;
    try {
        Derivation t = a.direction == "nd2seq" ? nd_to_seq(d, e) : seq_to_nd(d, e);
        out << to_json(t).dump(2) << "\n";
    } catch (const TranslationError& ex) {
        err << ex.what() << "\n";
        return exit_no;
    }
    return exit_yes;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intruder deduction and constraint solving"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "Fix the randomized sweep order");

    DeduceArgs da;
    CLI::App* deduce = app.add_subcommand("deduce", "Decide Γ ⊢ M for a problem file");
    deduce->add_option("--input,input", da.input, "Problem file")->required();
    deduce->add_option("--theory", da.theories, "empty|ac|xor|ag, repeatable")
        ->check(CLI::IsMember({"empty", "ac", "xor", "ag"}));
    deduce->add_option("--emit-proof", da.emit, "text|json")->check(CLI::IsMember({"text", "json"}));
    deduce->add_option("--system", da.system, "Proof system of the emitted proof: L|S")
        ->check(CLI::IsMember({"L", "S"}));
    deduce->add_flag("--quiet,-q", da.quiet, "Only set the exit code");
    deduce->add_option("--seed", seed, "Fix the randomized sweep order");

    ConstraintArgs ca;
    CLI::App* cons = app.add_subcommand("constraints", "Solve a deducibility constraint system");
    cons->add_option("--input,input", ca.input, "Constraint file")->required();
    cons->add_flag("--all-solutions", ca.all, "Print every solution");
    cons->add_option("--emit", ca.emit, "text|json")->check(CLI::IsMember({"text", "json"}));
    cons->add_option("--strategy", ca.strategy, "first-unsolved (default) or exhaustive")
        ->check(CLI::IsMember({"exhaustive", "first-unsolved"}));
    cons->add_option("--workers", ca.workers, "Worker threads")->check(CLI::Range(1, 64));

    ProofArgs ka;
    CLI::App* chk = app.add_subcommand("check", "Check a JSON proof");
    chk->add_option("--proof,proof", ka.proof, "Proof file")->required();
    chk->add_option("--theory", ka.theories, "empty|ac|xor|ag, repeatable")
        ->check(CLI::IsMember({"empty", "ac", "xor", "ag"}));

    ProofArgs ta;
    CLI::App* tr = app.add_subcommand("translate", "Translate between N and S proofs");
    tr->add_option("--direction", ta.direction, "nd2seq|seq2nd")
        ->required()
        ->check(CLI::IsMember({"nd2seq", "seq2nd"}));
    tr->add_option("--proof,proof", ta.proof, "Proof file")->required();
    tr->add_option("--theory", ta.theories, "empty|ac|xor|ag, repeatable")
        ->check(CLI::IsMember({"empty", "ac", "xor", "ag"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : exit_input;
    }
    try {
        if (*deduce) return cmd_deduce(da, seed, out, err);
        if (*cons) return cmd_constraints(ca, out, err);
        if (*chk) return cmd_check(ka, out, err);
        return cmd_translate(ta, out, err);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_input;
    }
}

}  // namespace intruder::cli
