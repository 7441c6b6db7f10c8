#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "unst/cli.hpp"

using namespace unst;
using namespace unst::cli;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "unst");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

} // namespace

TEST(ModuleSpecs, RoundTrip)
{
    for (const char* text : {"F(3)", "J(7,6)", "H(4)", "F2", "Sigma F2", "Sigma^3 F(1)", "Phi^2 F(1)", "Phi H(3)",
                             "T(F(1),F(1))", "T(Sigma F2,Phi J(2))"}) {
        const auto spec = parse_module_spec(text);
        EXPECT_EQ(to_string(spec), text);
        EXPECT_EQ(parse_module_spec(to_string(spec)), spec);
    }
    EXPECT_EQ(parse_module_spec("SigmaF2"), parse_module_spec("Sigma F2"));
    EXPECT_EQ(parse_module_spec(" T( F(1) , F(1) ) "), parse_module_spec("T(F(1),F(1))"));
    EXPECT_EQ(parse_module_spec("Sigma^1 F2"), parse_module_spec("Sigma F2"));
}

TEST(ModuleSpecs, ParseErrors)
{
    for (const char* bad : {"", "J(3,", "F()", "G(2)", "Sigma", "T(F(1))", "F(1) F(1)", "Phi^ F(1)"})
        EXPECT_THROW(parse_module_spec(bad), std::invalid_argument) << bad;
}

TEST(ModuleSpecs, Finiteness)
{
    EXPECT_TRUE(parse_module_spec("J(3)").finite());
    EXPECT_TRUE(parse_module_spec("Phi Sigma F2").finite());
    EXPECT_FALSE(parse_module_spec("T(F(1),J(2))").finite());
    // J(3): the bottom class and its Sq^1 dual; Sq^2, Sq^3, Sq^{2,1} exceed the excess bound.
    EXPECT_EQ(build_module(parse_module_spec("J(3)"), 16)->total_dim(), 2u);
}

TEST(Cli, Adem)
{
    auto r = run_cli({"adem", "Sq2 Sq2"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "Sq^{3,1}\n");
    EXPECT_EQ(run_cli({"adem", "Sq3"}).out, "Sq^{3}\n");
    EXPECT_EQ(run_cli({"adem", "Sq1", "Sq1"}).out, "0\n");
    r = run_cli({"adem", "Sq1 Sq1", "--json"});
    EXPECT_NE(r.out.find("\"normal\": \"0\""), std::string::npos);
    EXPECT_EQ(run_cli({"adem", "Sq"}).status, 2);
}

TEST(Cli, ResolveInjective)
{
    auto r = run_cli({"resolve", "H(4)", "--steps", "3"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "J(8) ; J(7,6) ; J(6,4)");
    r = run_cli({"resolve", "H(2)"});
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "J(2)");
    EXPECT_NE(r.out.find("complete"), std::string::npos);
}

TEST(Cli, ResolveProjective)
{
    const auto r = run_cli({"resolve", "SigmaF2", "--projective", "--steps", "1", "--max-degree", "16"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("P_0 = F(1)\n"), std::string::npos);
}

TEST(Cli, Ext)
{
    auto r = run_cli({"ext", "F(1)", "F(1)", "--d", "3"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("d=0  1\n"), std::string::npos);
    EXPECT_NE(r.out.find("d=3  0\n"), std::string::npos);
    r = run_cli({"ext", "T(F(1),F(1))", "F(1)", "--d", "5"});
    EXPECT_NE(r.out.find("d=5  1\n"), std::string::npos);
    r = run_cli({"ext", "Phi^2 F(1)", "F(1)", "--d", "4", "--limit", "20"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("unavailable"), std::string::npos);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run_cli({}).status, 2);
    EXPECT_EQ(run_cli({"verify", "--suite", "bogus"}).status, 2);
    const auto r = run_cli({"resolve", "J(3,"});
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("position"), std::string::npos);
    EXPECT_EQ(run_cli({"--help"}).status, 0);
}

TEST(Cli, VerifyTablesReportsThirdTermConflict)
{
    const auto r = run_cli({"verify", "--suite", "tables"});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("[fail] j2k_adjudication"), std::string::npos);
    EXPECT_NE(r.out.find("limitations:"), std::string::npos);
}

TEST(Cache, HitsAfterFirstComputation)
{
    const auto dir = std::filesystem::temp_directory_path() / "unst_cache_test";
    std::filesystem::remove_all(dir);
    NormalFormCache cache(dir);
    EXPECT_EQ(cache.normalize("Sq2 Sq2"), "Sq^{3,1}");
    EXPECT_FALSE(cache.last_was_hit());
    EXPECT_EQ(cache.normalize("Sq2  Sq2"), "Sq^{3,1}");
    EXPECT_TRUE(cache.last_was_hit());
    // A corrupt entry is recomputed.
    for (const auto& e : std::filesystem::directory_iterator(dir))
        std::ofstream(e.path()) << "{";
    EXPECT_EQ(cache.normalize("Sq2 Sq2"), "Sq^{3,1}");
    EXPECT_FALSE(cache.last_was_hit());
    std::filesystem::remove_all(dir);

    NormalFormCache off(std::nullopt);
    EXPECT_FALSE(off.enabled());
    EXPECT_EQ(off.normalize("Sq1 Sq2 Sq1"), "Sq^{3,1}");
    EXPECT_FALSE(off.last_was_hit());
}
