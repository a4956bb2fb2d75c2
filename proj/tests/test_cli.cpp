#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "intruder/cli.hpp"
#include "support.hpp"

using namespace itest;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "intruder");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(INTRUDER_SAMPLES) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / ("intruder_cli_" + name);
    std::ofstream(path) << contents;
    return path.string();
}

}  // namespace

TEST(CliDeduce, SampleExitCodes) {
    EXPECT_EQ(run({"deduce", sample("ac_pair.txt")}).code, cli::exit_yes);
    EXPECT_EQ(run({"deduce", sample("empty_enc.txt")}).code, cli::exit_no);
    EXPECT_EQ(run({"deduce", sample("empty_unknown.txt")}).code, cli::exit_no);
    EXPECT_EQ(run({"deduce", sample("blind_sign.txt")}).code, cli::exit_yes);
    EXPECT_EQ(run({"deduce", sample("xor_sum.txt")}).code, cli::exit_yes);
    EXPECT_EQ(run({"deduce", sample("ag_combo.txt")}).code, cli::exit_yes);
    EXPECT_EQ(run({"deduce", sample("combined.txt")}).code, cli::exit_yes);
}

TEST(CliDeduce, JsonProofChecks) {
    Outcome r = run({"deduce", "--input", sample("ac_pair.txt"), "--emit-proof", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    Derivation d = parse_proof(r.out);
    EXPECT_EQ(d.system, System::L);
    EXPECT_TRUE(check(d, ac_plus()));

    Outcome s = run({"deduce", sample("ac_pair.txt"), "--emit-proof", "json", "--system", "S"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(parse_proof(s.out).system, System::S);
}

TEST(CliDeduce, TextProofAndQuiet) {
    Outcome r = run({"deduce", sample("blind_sign.txt"), "--emit-proof", "text"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("blind2"), std::string::npos) << r.out;
    Outcome q = run({"deduce", sample("blind_sign.txt"), "--quiet"});
    EXPECT_EQ(q.code, 0);
    EXPECT_TRUE(q.out.empty());
}

TEST(CliDeduce, TheoryFlagOverridesFile) {
    std::string f = temp_file("xor.txt", "knows a + b, b\ngoal a\n");
    EXPECT_EQ(run({"deduce", f}).code, cli::exit_input);
    EXPECT_EQ(run({"deduce", f, "--theory", "xor"}).code, cli::exit_yes);
    EXPECT_EQ(run({"deduce", f, "--theory", "ac"}).code, cli::exit_no);
}

TEST(CliDeduce, SeedDoesNotChangeTheAnswer) {
    for (const char* s : {"1", "7", "12345"})
        EXPECT_EQ(run({"--seed", s, "deduce", sample("combined.txt")}).code, cli::exit_yes);
}

TEST(CliDeduce, ParseErrorsCarryLineAndColumn) {
    std::string f = temp_file("bad.txt", "theory xor\nknows a, pair(a,\ngoal a\n");
    Outcome r = run({"deduce", f});
    EXPECT_EQ(r.code, cli::exit_input);
    EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;

    std::string g = temp_file("badtheory.txt", "theory nope\nknows a\ngoal a\n");
    Outcome t = run({"deduce", g});
    EXPECT_EQ(t.code, cli::exit_input);
    EXPECT_NE(t.err.find(":1:"), std::string::npos) << t.err;

    std::string h = temp_file("nogoal.txt", "knows a\n");
    EXPECT_EQ(run({"deduce", h}).code, cli::exit_input);
}

TEST(CliDeduce, BadArgumentsAreInputErrors) {
    EXPECT_EQ(run({"deduce", "/nonexistent/file.txt"}).code, cli::exit_input);
    EXPECT_EQ(run({"deduce", sample("ac_pair.txt"), "--theory", "bogus"}).code, cli::exit_input);
    EXPECT_EQ(run({}).code, cli::exit_input);
    EXPECT_EQ(run({"help-me"}).code, cli::exit_input);
}

TEST(CliConstraints, SampleExitCodes) {
    EXPECT_EQ(run({"constraints", sample("solved.cs")}).code, cli::exit_yes);
    EXPECT_EQ(run({"constraints", sample("c5.cs"), "--all-solutions"}).code, cli::exit_yes);
    EXPECT_EQ(run({"constraints", sample("handshake.cs")}).code, cli::exit_yes);
    EXPECT_EQ(run({"constraints", sample("key_from_reply.cs")}).code, cli::exit_yes);
    EXPECT_EQ(run({"constraints", sample("unsat.cs")}).code, cli::exit_no);
    EXPECT_EQ(run({"constraints", sample("unsat.cs"), "--strategy", "exhaustive"}).code, cli::exit_no);
}

TEST(CliConstraints, JsonSolutionsVerify) {
    std::string path = sample("handshake.cs");
    Outcome r = run({"constraints", path, "--emit", "json", "--all-solutions"});
    ASSERT_EQ(r.code, 0) << r.err;
    nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("satisfiable").get<bool>());
    ASSERT_FALSE(j.at("solutions").empty());
    ConstraintSystem c = parse_constraint_system(read_file(path));
    for (const auto& sol : j.at("solutions")) {
        Substitution th;
        for (auto it = sol.begin(); it != sol.end(); ++it) th.bind(v(it.key().substr(1).c_str()), P(it.value().get<std::string>().c_str()));
        EXPECT_TRUE(verify_solution(c, th)) << sol.dump();
    }
}

TEST(CliConstraints, WorkersMatchSequential) {
    Outcome a = run({"constraints", sample("c5.cs"), "--all-solutions", "--emit", "json"});
    Outcome b = run({"constraints", sample("c5.cs"), "--all-solutions", "--emit", "json", "--workers", "3"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(nlohmann::json::parse(a.out).at("solutions"), nlohmann::json::parse(b.out).at("solutions"));
}

TEST(CliConstraints, IllFormedInputNamesTheCondition) {
    Outcome r = run({"constraints", sample("bad_origin.cs")});
    EXPECT_EQ(r.code, cli::exit_input);
    EXPECT_NE(r.err.find("condition 2"), std::string::npos) << r.err;

    std::string f = temp_file("nopublic.cs", "a |- a\n");
    Outcome p = run({"constraints", f});
    EXPECT_EQ(p.code, cli::exit_input);
    EXPECT_NE(p.err.find(":1:"), std::string::npos) << p.err;
}

TEST(CliCheck, ValidAndCorruptedProofs) {
    Outcome ok = run({"check", sample("ac_pair.proof.json"), "--theory", "ac"});
    EXPECT_EQ(run({"check", sample("ac_pair.proof.json")}).code, cli::exit_no);
    EXPECT_EQ(ok.code, cli::exit_yes) << ok.err;
    EXPECT_NE(ok.out.find("valid"), std::string::npos);
    Outcome bad = run({"check", "--proof", sample("ac_pair.corrupted.json"), "--theory", "ac"});
    EXPECT_EQ(bad.code, cli::exit_no);
    EXPECT_NE(bad.out.find("invalid at"), std::string::npos) << bad.out;
    std::string junk = temp_file("junk.json", "{\"system\": 3}");
    EXPECT_EQ(run({"check", junk}).code, cli::exit_input);
}

TEST(CliTranslate, SequentToNaturalDeduction) {
    Outcome r = run({"translate", "--direction", "seq2nd", "--proof", sample("ac_pair.proof.json"), "--theory", "ac"});
    ASSERT_EQ(r.code, 0) << r.err;
    Derivation nd = parse_proof(r.out);
    EXPECT_EQ(nd.system, System::N);
    EXPECT_TRUE(check(nd, ac_plus()));

    std::string nd_file = temp_file("nd.json", r.out);
    Outcome back = run({"translate", "--direction", "nd2seq", "--proof", nd_file, "--theory", "ac"});
    ASSERT_EQ(back.code, 0) << back.err;
    EXPECT_EQ(parse_proof(back.out).system, System::S);

    EXPECT_EQ(run({"translate", "--direction", "nd2seq", "--proof", sample("ac_pair.proof.json"), "--theory", "ac"}).code,
              cli::exit_no);
    EXPECT_EQ(run({"translate", "--direction", "sideways", "--proof", sample("ac_pair.proof.json")}).code,
              cli::exit_input);
}
