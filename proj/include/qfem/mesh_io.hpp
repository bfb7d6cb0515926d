#pragma once

#include <map>
#include <string>
#include <vector>

#include "qfem/mesh.hpp"

namespace qfem {

/// Mesh snapshot as stored in the JSON format (field names are part of the
/// stable interface, see README):
///   format, version, domain{origin,width,height}, balanced,
///   nodes [[x,y]...], polygons [{cell,level,nodes,hanging}...],
///   hanging [{node,masters}...]
struct ImportedPolygon {
    int cell = -1;
    int level = 0;
    std::vector<int> nodes;
    std::vector<bool> hanging;
};

struct ImportedMesh {
    Domain domain;
    bool balanced = false;
    std::vector<Vec2> nodes;
    std::vector<ImportedPolygon> polygons;
    std::map<int, std::pair<int, int>> hanging;
};

void write_mesh_json(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                     const std::string& path);

ImportedMesh read_mesh_json(const std::string& path);

/// Legacy ASCII VTK unstructured grid of VTK_POLYGON cells with per-cell
/// refinement level.
void write_mesh_vtk(const QuadtreeMesh& mesh, const std::vector<PolygonElement>& elements,
                    const std::string& path);

}  // namespace qfem
