#include "planar/cli.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "planar");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = planar::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(std::filesystem::temp_directory_path() / ("planar_cli_" + std::to_string(::getpid()))) {
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace

TEST(Cli, TreesCount) {
    EXPECT_EQ(run({"trees", "count", "--degree", "4"}).out, "11\n");
    EXPECT_EQ(run({"trees", "count", "--degree", "8"}).out, "4279\n");
    EXPECT_EQ(run({"trees", "count", "--degree", "6", "--k", "2"}).out, "42\n");
    // Little Schroeder numbers: (n+1) s(n+1) = 3(2n-1) s(n) - (n-2) s(n-1), s(1) = s(2) = 1.
    mpz_class prev = 1, cur = 1;
    for (int n = 2; n < 30; ++n) {
        mpz_class next = (3 * (2 * n - 1) * cur - (n - 2) * prev) / (n + 1);
        prev = cur;
        cur = next;
    }
    EXPECT_EQ(run({"trees", "count", "--degree", "30"}).out, cur.get_str() + "\n");
}

TEST(Cli, TreesList) {
    const auto r = run({"trees", "list", "--degree", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "(x,(x,x))\n((x,x),x)\n(x,x,x)\n");
}

TEST(Cli, TreesBinomAndContract) {
    EXPECT_EQ(run({"trees", "binom", "--tree", "(x,(x,(x,x)))", "--tree", "(x,(x,x))"}).out, "4\n");
    EXPECT_EQ(run({"trees", "contract", "--tree", "(x,((x,x),x))", "--leaves", "0,1,2"}).out, "(x,(x,x))\n");
}

TEST(Cli, ExpCoeff) {
    EXPECT_EQ(run({"exp", "coeff", "--k", "2", "--tree", "((x,x),(x,x))"}).out, "1/56\n");
    EXPECT_EQ(run({"exp", "coeff", "--tree", "(x,x,x)"}).out, "0\n");
}

TEST(Cli, ExpTable) {
    const auto r = run({"exp", "table", "--k", "2", "--trunc", "2"});
    EXPECT_EQ(r.out, "1 1\nx 1\n(x,x) 1/2\n");
    const auto csv = run({"exp", "table", "--trunc", "1", "--scalar", "complex", "--format", "csv"});
    EXPECT_EQ(csv.out, "tree,degree,re,im\n\"1\",0,1,0\n\"x\",1,1,0\n");
}

TEST(Cli, ExpTranslate) {
    const auto ok = run({"exp", "translate", "--k", "2", "--a", "0.3", "--trunc", "4", "--degree", "10", "--tol", "1e-4"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("PASS"), std::string::npos);
    const auto fail = run({"exp", "translate", "--k", "2", "--a", "0.3", "--trunc", "4", "--degree", "6", "--tol", "1e-12"});
    EXPECT_EQ(fail.code, 2);
    EXPECT_NE(fail.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SeriesRoundTrip) {
    TempDir dir;
    const auto f = dir.write("f.json", R"J({"trunc":3,"scalar":"rational","terms":[{"tree":"1","value":"2"},{"tree":"x","value":"1"}]})J");
    const auto inv = run({"series", "inv", "--in", f, "--out", dir.file("g.json")});
    ASSERT_EQ(inv.code, 0) << inv.err;
    const auto prod = run({"series", "mul", "--in", dir.file("g.json"), "--in", f, "--format", "plain"});
    EXPECT_EQ(prod.out, "1 1\n");
    const auto val = run({"series", "eval", "--in", f, "--a", "1/3"});
    EXPECT_EQ(val.out, "7/3\n");
    const auto root = run({"series", "sqrt", "--in", f, "--a", "3"});
    EXPECT_EQ(root.code, 1);  // 3^2 != 2
    EXPECT_NE(root.err.find("error"), std::string::npos);
}

TEST(Cli, Rebase) {
    TempDir dir;
    const auto f = dir.write("f.json", R"J({"trunc":2,"scalar":"rational","terms":[{"tree":"(x,x)","value":"1"}]})J");
    const auto r = run({"rebase", "--in", f, "--a", "2", "--trunc", "2", "--format", "plain"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("base 2\n1 4\nx 4\n(x,x) 1\n"), std::string::npos) << r.out;
    const auto j = run({"rebase", "--in", f, "--a", "2", "--trunc", "2"});
    const auto doc = planar::Json::parse(j.out);
    EXPECT_EQ(doc.at("base"), "2");
    EXPECT_EQ(run({"rebase", "--in", f, "--trunc", "2"}).code, 1);
}

TEST(Cli, ZetaCsv) {
    const auto r = run({"zeta", "--r", "2", "--trunc", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "tree,degree,re,im");
    EXPECT_NE(r.out.find("\"1\",0,1.64493406684822"), std::string::npos) << r.out;
    EXPECT_EQ(run({"zeta", "--r", "0.5"}).code, 1);
    const auto moved = run({"zeta", "--r", "3", "--b", "2.2", "--trunc", "2"});
    EXPECT_EQ(moved.code, 0);
}

TEST(Cli, Gamma) {
    const auto r = run({"gamma", "--r", "1", "--trunc", "0"});
    EXPECT_EQ(r.out, "tree,degree,re,im\n\"1\",0,1,0\n");
    const auto probe = run({"gamma", "--r", "1.5", "--trunc", "3", "--probe"});
    EXPECT_EQ(probe.code, 0);
    EXPECT_NE(probe.out.find("((x,x),x)"), std::string::npos);
}

TEST(Cli, Radius) {
    const auto r = run({"radius", "--series", "g", "--degree", "16"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("estimate 0.28"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("window 11..16"), std::string::npos) << r.out;
    EXPECT_NE(run({"radius", "--series", "exp", "--degree", "16"}).out.find("estimate inf"), std::string::npos);
    EXPECT_EQ(run({"radius"}).code, 1);
}

TEST(Cli, CheckSuites) {
    const auto r = run({"check", "example"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("PASS example", 0), 0u);
    EXPECT_EQ(run({"check", "nope"}).code, 1);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"trees", "count"}).code, 1);
    EXPECT_EQ(run({"trees", "binom", "--tree", "(x"}).code, 1);
    EXPECT_EQ(run({"exp", "coeff", "--k", "1", "--tree", "x"}).code, 1);
    const auto help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("trees"), std::string::npos);
}
