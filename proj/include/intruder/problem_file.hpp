#pragma once

// Line-oriented problem files.
//
// Deduction:                 Constraints:
//   theory ac                  public a
//   knows a, b                 a, enc(?x, k) |- ?x
//   goal pair(a,b) + a         a, k |-R ?x
//
// `#` starts a comment. Repeated `theory` and `knows` lines accumulate.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "constraints.hpp"
#include "syntax.hpp"
#include "term.hpp"

namespace intruder {

struct DeduceProblem {
    std::vector<std::string> theories;
    std::vector<Term> knows;
    Term goal;
};

namespace problem_detail {

struct Line {
    std::size_t number;
    std::string_view text;  // comment stripped
    std::size_t column;     // 0-based offset of text within the raw line
};

inline std::vector<Line> lines(std::string_view src) {
    std::vector<Line> out;
    std::size_t n = 0;
    while (!src.empty()) {
        ++n;
        std::size_t eol = src.find('\n');
        std::string_view raw = src.substr(0, eol);
        src = eol == std::string_view::npos ? std::string_view() : src.substr(eol + 1);
        if (std::size_t hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        std::size_t e = raw.find_last_not_of(" \t\r");
        out.push_back({n, raw.substr(b, e - b + 1), b});
    }
    return out;
}

// Splits "keyword rest" at the first blank.
inline std::pair<std::string_view, std::size_t> keyword(const Line& l) {
    std::size_t sp = l.text.find_first_of(" \t");
    std::string_view kw = l.text.substr(0, sp);
    if (sp == std::string_view::npos) return {kw, l.text.size()};
    std::size_t rest = l.text.find_first_not_of(" \t", sp);
    return {kw, rest == std::string_view::npos ? l.text.size() : rest};
}

inline Term parse_at(const Line& l, std::size_t from, std::size_t to) {
    return TermParser(l.text.substr(from, to - from), l.number, l.column + from).parse_all();
}

inline std::vector<Term> parse_list_at(const Line& l, std::size_t from, std::size_t to) {
    return TermParser(l.text.substr(from, to - from), l.number, l.column + from).parse_list();
}

[[noreturn]] inline void fail(const Line& l, std::size_t at, const std::string& msg) {
    throw ParseError(msg, l.number, l.column + at + 1);
}

}  // namespace problem_detail

inline DeduceProblem parse_deduce_problem(std::string_view src) {
    using namespace problem_detail;
    DeduceProblem p;
    bool have_goal = false;
    for (const Line& l : lines(src)) {
        auto [kw, rest] = keyword(l);
        if (kw == "theory") {
            std::string_view names = l.text.substr(rest);
            std::size_t start = 0;
            while (start <= names.size()) {
                std::size_t comma = names.find(',', start);
                std::string_view item = names.substr(start, comma == std::string_view::npos ? names.npos : comma - start);
                std::size_t b = item.find_first_not_of(" \t");
                if (b == std::string_view::npos) fail(l, rest + start, "expected a theory name");
                std::size_t e = item.find_last_not_of(" \t");
                std::string_view name = item.substr(b, e - b + 1);
                if (name != "empty" && name != "ac" && name != "xor" && name != "ag")
                    fail(l, rest + start + b,
                         "unknown theory '" + std::string(name) + "' (expected empty, ac, xor or ag)");
                p.theories.emplace_back(name);
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
        } else if (kw == "knows") {
            for (Term t : parse_list_at(l, rest, l.text.size())) p.knows.push_back(t);
        } else if (kw == "goal") {
            if (have_goal) fail(l, 0, "duplicate goal");
            if (rest == l.text.size()) fail(l, rest, "expected a goal term");
            p.goal = parse_at(l, rest, l.text.size());
            have_goal = true;
        } else {
            fail(l, 0, "unknown directive '" + std::string(kw) + "' (expected theory, knows or goal)");
        }
    }
    if (!have_goal) throw ParseError("missing goal", 1, 1);
    return p;
}

inline ConstraintSystem parse_constraint_system(std::string_view src) {
    using namespace problem_detail;
    ConstraintSystem c;
    bool first = true;
    for (const Line& l : lines(src)) {
        if (first) {
            auto [kw, rest] = keyword(l);
            if (kw != "public") fail(l, 0, "first line must be 'public <name>'");
            Term a = parse_at(l, rest, l.text.size());
            if (!a.is_name()) fail(l, rest, "public constant must be a name");
            c.public_name = a;
            first = false;
            continue;
        }
        std::size_t turn = l.text.find("|-");
        if (turn == std::string_view::npos) fail(l, 0, "expected '|-' or '|-R'");
        Constraint k;
        std::size_t goal_at = turn + 2;
        if (goal_at < l.text.size() && l.text[goal_at] == 'R') {
            k.kind = ConstraintKind::Right;
            ++goal_at;
        }
        for (Term t : parse_list_at(l, 0, turn)) k.sigma.insert(t);
        if (l.text.find_first_not_of(" \t", goal_at) == std::string_view::npos) fail(l, goal_at, "expected a goal term");
        k.goal = parse_at(l, goal_at, l.text.size());
        c.items.push_back(std::move(k));
    }
    if (first) throw ParseError("missing 'public <name>' line", 1, 1);
    return c;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace intruder
