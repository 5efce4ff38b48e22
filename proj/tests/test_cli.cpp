#include "cli.hpp"

#include "peerimex/tableau_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = peerimex::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("peerimex_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, TableauCheckPasses) {
    const auto r = run({"tableau", "--method", "imex-bdf3", "--check", "--manifest", path("t.manifest")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("check passed"), std::string::npos);
    EXPECT_NE(r.out.find("zero stability"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(path("t.manifest")));
}

TEST_F(Cli, TableauWritesLoadableFile) {
    const auto r = run({"tableau", "--method", "imex-peer2", "--out", path("p2.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = peerimex::load_tableau(path("p2.json"));
    EXPECT_EQ(t.label(), "imex-peer2");
    EXPECT_TRUE(fs::exists(path("p2.json.manifest")));
}

TEST_F(Cli, Angle) {
    const auto r = run({"angle", "--methods", "imex-bdf2,imex-bdf4", "--manifest", path("a.manifest")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("imex-bdf2 alpha=90.00"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("imex-bdf4 alpha=73.3"), std::string::npos) << r.out;
}

TEST_F(Cli, StabilityCsvAndSvg) {
    const auto r = run({"stability", "--method", "imex-euler", "--beta", "0", "--rays", "64", "--out", path("r.csv"),
                        "--svg", path("r.svg")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("area=3.1"), std::string::npos) << r.out;
    const auto csv = slurp(path("r.csv"));
    EXPECT_EQ(csv.rfind("beta_deg,ray_angle_deg,re_z0,im_z0", 0), 0u);
    EXPECT_NE(slurp(path("r.svg")).find("class=\"region\""), std::string::npos);
}

TEST_F(Cli, ManifestReplayIsDeterministic) {
    ASSERT_EQ(run({"stability", "--method", "imex-bdf2", "--beta", "0,45", "--rays", "32", "--out", path("a.csv")}).code, 0);
    const auto manifest = slurp(path("a.csv.manifest"));
    EXPECT_NE(manifest.find("[stability]"), std::string::npos) << manifest;
    const auto first = slurp(path("a.csv"));
    fs::remove(path("a.csv"));
    const auto r = run({"--config", path("a.csv.manifest")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path("a.csv")), first);
    EXPECT_EQ(slurp(path("a.csv.manifest")), manifest);
}

TEST_F(Cli, ConvergeSmall) {
    const auto r = run({"converge", "--problem", "advreac", "--m", "16", "--dts", "0.01,0.005", "--methods",
                        "imex-bdf2", "--out", path("c.csv"), "--svg", path("c.svg")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(path("c.csv"));
    EXPECT_EQ(csv.rfind("problem,method,dt,error,observed_order", 0), 0u);
    EXPECT_NE(slurp(path("c.svg")).find("class=\"guide\""), std::string::npos);
}

TEST_F(Cli, OptimizeSmall) {
    const auto r = run({"optimize", "--method", "imex-bdf2", "--search-rays", "32", "--rays", "32", "--out",
                        path("opt.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("iter,value,area,c_ex,penalty", 0), 0u) << r.out;
    EXPECT_EQ(peerimex::load_tableau(path("opt.json")).stages(), 2);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"tableau", "--bogus"}).code, 1);
    EXPECT_EQ(run({"tableau", "--method", "imex-bdf9"}).code, 1);
    EXPECT_EQ(run({"tableau", "--method-file", path("missing.json")}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    {
        std::ofstream f(path("dup.json"));
        f << R"({"name":"dup","s":2,"c":[1,1],"P":[[0,1],[0,1]],"R":[[1,0],[0,1]]})";
    }
    const auto dup = run({"tableau", "--method-file", path("dup.json"), "--manifest", path("d.manifest")});
    EXPECT_EQ(dup.code, 1);
    EXPECT_NE(dup.err.find("coincide"), std::string::npos) << dup.err;
    EXPECT_EQ(run({"converge", "--problem", "advreac", "--m", "4", "--manifest", path("m.manifest")}).code, 1);
}
