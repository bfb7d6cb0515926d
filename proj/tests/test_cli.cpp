// End-to-end checks of the command-line tool via a spawned process.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(QFEM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "qfem_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> read_lines(const std::string& p) {
    std::ifstream f(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("mesh subcommand writes json and vtk; uniform depth 2 has 16 polygons") {
    TempDir tmp;
    CHECK(run("mesh --gen uniform --depth 2 --out " + tmp.str("u2")) == 0);
    CHECK(fs::exists(tmp.str("u2.json")));
    CHECK(fs::exists(tmp.str("u2.vtk")));
    // 16 polygon entries in the json
    std::ifstream f(tmp.str("u2.json"));
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string body = ss.str();
    std::size_t count = 0, pos = 0;
    while ((pos = body.find("\"cell\"", pos)) != std::string::npos) {
        ++count;
        pos += 6;
    }
    CHECK(count == 16);
}

TEST_CASE("validator accepts balanced and rejects unbalanced corner(3)") {
    TempDir tmp;
    REQUIRE(run("mesh --gen corner --depth 3 --balance --out " + tmp.str("c3b")) == 0);
    CHECK(run("validate --in " + tmp.str("c3b.json")) == 0);
    REQUIRE(run("mesh --gen corner --depth 3 --no-balance --out " + tmp.str("c3u")) == 0);
    CHECK(run("validate --in " + tmp.str("c3u.json")) == 1);
}

TEST_CASE("patchtest emits one row per mesh and treatment; fem is '-' when unbalanced") {
    TempDir tmp;
    CHECK(run("patchtest --gen corner --depth 3 --no-balance --case A"
              " --treatment fem --treatment sbfem --out " +
              tmp.str("p.csv")) == 0);
    const auto lines = read_lines(tmp.str("p.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "mesh_id,generator,depth,balanced,treatment,n_dof,rel_l2_error,slope");
    CHECK(lines[1].find(",fem,") != std::string::npos);
    CHECK(lines[1].find(",-,") != std::string::npos);
    CHECK(lines[2].find(",sbfem,") != std::string::npos);
    CHECK(lines[2].find(",-,") == std::string::npos);
}

TEST_CASE("patchtest output is deterministic") {
    TempDir tmp;
    REQUIRE(run("patchtest --gen diag --depths 1 2 --case B --treatment nsfemn --out " +
                tmp.str("a.csv")) == 0);
    REQUIRE(run("patchtest --gen diag --depths 1 2 --case B --treatment nsfemn --out " +
                tmp.str("b.csv")) == 0);
    CHECK(read_lines(tmp.str("a.csv")) == read_lines(tmp.str("b.csv")));
}

TEST_CASE("poisson emits rows per depth with a slope on the last row") {
    TempDir tmp;
    CHECK(run("poisson --gen uniform --depths 2 3 4 --treatment fem --out " + tmp.str("poi.csv")) ==
          0);
    const auto lines = read_lines(tmp.str("poi.csv"));
    REQUIRE(lines.size() == 4);
    CHECK(lines[1].back() == ',');   // no slope on intermediate rows
    CHECK(lines[3].back() != ',');   // slope on the last row
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("patchtest --out /tmp/x.csv") == 2);        // no treatments
    CHECK(run("") == 2);                                  // no subcommand
    CHECK(run("mesh --gen nope --depth 1 --out /tmp/x") == 2);
}

TEST_CASE("nonexistent output directory fails without partial files") {
    TempDir tmp;
    const std::string missing = tmp.str("missing_dir") + "/out.csv";
    CHECK(run("poisson --gen uniform --depths 2 --treatment fem --out " + missing) == 1);
    CHECK_FALSE(fs::exists(missing));
    CHECK_FALSE(fs::exists(missing + ".tmp"));
}
