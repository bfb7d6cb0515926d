#include "qfem/mesh_io.hpp"

#include <fstream>
#include <iomanip>

#include <json.hpp>

namespace qfem {

using nlohmann::json;

void write_mesh_json(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                     const std::string& path) {
    json j;
    j["format"] = "qfem-mesh";
    j["version"] = 1;
    j["domain"] = {{"origin", {mesh.domain().origin.x, mesh.domain().origin.y}},
                   {"width", mesh.domain().width},
                   {"height", mesh.domain().height}};
    j["balanced"] = mesh.balanced();

    json nodes = json::array();
    for (const Vec2& p : mesh.nodes()) nodes.push_back({p.x, p.y});
    j["nodes"] = std::move(nodes);

    json polys = json::array();
    for (const PolygonElement& e : elements) {
        json p;
        p["cell"] = e.cell_index;
        p["level"] = e.level;
        p["nodes"] = e.node_ids;
        std::vector<int> mask(e.hanging.begin(), e.hanging.end());
        p["hanging"] = mask;
        polys.push_back(std::move(p));
    }
    j["polygons"] = std::move(polys);

    json hang = json::array();
    for (const auto& [node, masters] : mesh.hanging())
        hang.push_back({{"node", node}, {"masters", {masters.first, masters.second}}});
    j["hanging"] = std::move(hang);

    std::ofstream f(path);
    if (!f) throw MeshIoError("write_mesh_json: cannot open " + path);
    f << std::setprecision(17) << j.dump(1) << "\n";
    if (!f) throw MeshIoError("write_mesh_json: write failed for " + path);
}

ImportedMesh read_mesh_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw MeshIoError("read_mesh_json: cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw MeshIoError("read_mesh_json: parse error in " + path + ": " + e.what());
    }
    if (j.value("format", "") != "qfem-mesh")
        throw MeshIoError("read_mesh_json: not a qfem-mesh file: " + path);

    ImportedMesh m;
    m.domain.origin = {j["domain"]["origin"][0].get<double>(),
                       j["domain"]["origin"][1].get<double>()};
    m.domain.width = j["domain"]["width"].get<double>();
    m.domain.height = j["domain"]["height"].get<double>();
    m.balanced = j.value("balanced", false);
    for (const auto& n : j["nodes"]) m.nodes.push_back({n[0].get<double>(), n[1].get<double>()});
    for (const auto& p : j["polygons"]) {
        ImportedPolygon poly;
        poly.cell = p["cell"].get<int>();
        poly.level = p["level"].get<int>();
        poly.nodes = p["nodes"].get<std::vector<int>>();
        for (const auto& h : p["hanging"]) poly.hanging.push_back(h.get<int>() != 0);
        m.polygons.push_back(std::move(poly));
    }
    for (const auto& h : j["hanging"])
        m.hanging[h["node"].get<int>()] = {h["masters"][0].get<int>(), h["masters"][1].get<int>()};
    return m;
}

void write_mesh_vtk(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                    const std::string& path) {
    std::ofstream f(path);
    if (!f) throw MeshIoError("write_mesh_vtk: cannot open " + path);
    f << std::setprecision(17);
    f << "# vtk DataFile Version 3.0\n";
    f << "qfem quadtree mesh\n";
    f << "ASCII\n";
    f << "DATASET UNSTRUCTURED_GRID\n";
    f << "POINTS " << mesh.node_count() << " double\n";
    for (const Vec2& p : mesh.nodes()) f << p.x << " " << p.y << " 0\n";

    std::size_t list_size = 0;
    for (const PolygonElement& e : elements) list_size += 1 + e.node_ids.size();
    f << "CELLS " << elements.size() << " " << list_size << "\n";
    for (const PolygonElement& e : elements) {
        f << e.node_ids.size();
        for (int id : e.node_ids) f << " " << id;
        f << "\n";
    }
    f << "CELL_TYPES " << elements.size() << "\n";
    for (std::size_t i = 0; i < elements.size(); ++i) f << "7\n";  // VTK_POLYGON
    f << "CELL_DATA " << elements.size() << "\n";
    f << "SCALARS level int 1\n";
    f << "LOOKUP_TABLE default\n";
    for (const PolygonElement& e : elements) f << e.level << "\n";
    if (!f) throw MeshIoError("write_mesh_vtk: write failed for " + path);
}

}  // namespace qfem
