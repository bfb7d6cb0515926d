#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qfem/generators.hpp"
#include "qfem/mesh_io.hpp"

using namespace qfem;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("/tmp/qfem_io_test_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("json round trip preserves the polygon extraction") {
    const Domain dom{{0.0, 0.0}, 1.0, 1.0};
    const QuadtreeMesh mesh = make_mesh(GeneratorKind::Corner, dom, 3, true);
    const auto polys = extract_polygon_elements(mesh);

    TempPath tmp("roundtrip.json");
    write_mesh_json(mesh, polys, tmp.path);
    const ImportedMesh imported = read_mesh_json(tmp.path);

    CHECK(imported.balanced == mesh.balanced());
    CHECK(imported.domain.width == mesh.domain().width);
    REQUIRE(imported.nodes.size() == static_cast<std::size_t>(mesh.node_count()));
    for (int i = 0; i < mesh.node_count(); ++i) {
        CHECK(imported.nodes[i].x == mesh.nodes()[i].x);
        CHECK(imported.nodes[i].y == mesh.nodes()[i].y);
    }
    REQUIRE(imported.polygons.size() == polys.size());
    for (std::size_t i = 0; i < polys.size(); ++i) {
        CHECK(imported.polygons[i].cell == polys[i].cell_index);
        CHECK(imported.polygons[i].level == polys[i].level);
        CHECK(imported.polygons[i].nodes == polys[i].node_ids);
        REQUIRE(imported.polygons[i].hanging.size() == polys[i].hanging.size());
        for (std::size_t k = 0; k < polys[i].hanging.size(); ++k)
            CHECK(imported.polygons[i].hanging[k] == polys[i].hanging[k]);
    }
    CHECK(imported.hanging.size() == mesh.hanging().size());
    for (const auto& [node, masters] : mesh.hanging()) {
        REQUIRE(imported.hanging.count(node) == 1);
        CHECK(imported.hanging.at(node) == masters);
    }
}

TEST_CASE("vtk export matches the legacy polygon layout") {
    const Domain dom{{0.0, 0.0}, 1.0, 1.0};
    const QuadtreeMesh mesh = make_mesh(GeneratorKind::Corner, dom, 2, true);
    const auto polys = extract_polygon_elements(mesh);

    TempPath tmp("mesh.vtk");
    write_mesh_vtk(mesh, polys, tmp.path);

    std::ifstream f(tmp.path);
    REQUIRE(f.good());
    std::string line;
    std::getline(f, line);
    CHECK(line == "# vtk DataFile Version 3.0");
    std::getline(f, line);  // title
    std::getline(f, line);
    CHECK(line == "ASCII");
    std::getline(f, line);
    CHECK(line == "DATASET UNSTRUCTURED_GRID");
    std::getline(f, line);
    std::istringstream pts(line);
    std::string tok, type;
    int n = 0;
    pts >> tok >> n >> type;
    CHECK(tok == "POINTS");
    CHECK(n == mesh.node_count());
    CHECK(type == "double");
    for (int i = 0; i < n; ++i) std::getline(f, line);
    std::getline(f, line);
    std::istringstream cells(line);
    int m = 0, total = 0;
    cells >> tok >> m >> total;
    CHECK(tok == "CELLS");
    CHECK(m == mesh.leaf_count());
    int expected_total = 0;
    for (const auto& p : polys) expected_total += 1 + p.size();
    CHECK(total == expected_total);
    // every polygon line starts with its vertex count
    for (const auto& p : polys) {
        std::getline(f, line);
        std::istringstream row(line);
        int cnt = 0;
        row >> cnt;
        CHECK(cnt == p.size());
    }
    std::getline(f, line);
    CHECK(line.rfind("CELL_TYPES", 0) == 0);
    for (int i = 0; i < m; ++i) {
        std::getline(f, line);
        CHECK(line == "7");  // VTK_POLYGON
    }
}

TEST_CASE("read_mesh_json rejects missing and malformed files") {
    CHECK_THROWS_AS((void)read_mesh_json("/tmp/qfem_does_not_exist.json"), MeshIoError);
    TempPath tmp("bad.json");
    {
        std::ofstream f(tmp.path);
        f << "{ not json";
    }
    CHECK_THROWS_AS((void)read_mesh_json(tmp.path), MeshIoError);
    {
        std::ofstream f(tmp.path);
        f << "{\"format\": \"something-else\"}";
    }
    CHECK_THROWS_AS((void)read_mesh_json(tmp.path), MeshIoError);
}
