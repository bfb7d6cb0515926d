#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qfem/element.hpp"
#include "qfem/errors.hpp"
#include "qfem/geometry.hpp"

namespace qfem {

struct Domain {
    Vec2 origin{0.0, 0.0};
    double width = 1.0;
    double height = 1.0;
};

/// Geometric view of a cell handed to refinement predicates.
struct CellView {
    Rect bounds;
    int level = 0;
};

using RefinePredicate = std::function<bool(const CellView&)>;

/// Quadtree over an axis-aligned rectangle. Cell corners live on a dyadic
/// integer grid of 2^kResBits units per domain extent, so node deduplication
/// is exact integer comparison. Immutable once built; queries are const.
class QuadtreeMesh {
public:
    static constexpr int kResBits = 24;
    static constexpr std::int64_t kRes = std::int64_t{1} << kResBits;

    struct Cell {
        std::int64_t ix0 = 0, iy0 = 0, isize = kRes;
        int level = 0;
        int parent = -1;
        int first_child = -1;  // four children contiguous; -1 marks a leaf
        // node ids of SW, SE, NE, NW corners (leaves only, set by finalize)
        std::array<int, 4> corner = {-1, -1, -1, -1};

        bool is_leaf() const { return first_child < 0; }
    };

    const Domain& domain() const { return domain_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<int>& leaves() const { return leaves_; }
    int leaf_count() const { return static_cast<int>(leaves_.size()); }

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::int64_t, std::int64_t>>& node_grid() const { return node_grid_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    /// node id -> ids of the two corner nodes of the coarse edge it hangs on.
    const std::map<int, std::pair<int, int>>& hanging() const { return hanging_; }

    bool balanced() const { return balanced_; }

    Rect cell_rect(int cell_index) const;
    Vec2 grid_to_point(std::int64_t ix, std::int64_t iy) const;

    /// Nodes lying strictly between the endpoints of a leaf edge, in the order
    /// given by increasing coordinate along the edge. Edge: 0=S, 1=E, 2=N, 3=W.
    std::vector<int> edge_interior_nodes(int cell_index, int edge) const;

    friend QuadtreeMesh build_quadtree(const Domain&, const RefinePredicate&, int max_level);
    friend QuadtreeMesh balance_two_to_one(const QuadtreeMesh&);

private:
    void split(int cell_index);
    void finalize();
    int node_id(std::int64_t ix, std::int64_t iy);  // get-or-create
    std::vector<int> leaves_touching(std::int64_t x0, std::int64_t x1,
                                     std::int64_t y0, std::int64_t y1) const;

    Domain domain_;
    std::vector<Cell> cells_;
    std::vector<int> leaves_;
    std::vector<Vec2> nodes_;
    std::vector<std::pair<std::int64_t, std::int64_t>> node_grid_;
    std::unordered_map<std::uint64_t, int> node_lookup_;
    // nodes per grid line, sorted by the running coordinate
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, int>>> vlines_, hlines_;
    std::map<int, std::pair<int, int>> hanging_;
    bool balanced_ = false;
};

/// Refine from a single root cell while `refine` holds and level < max_level.
QuadtreeMesh build_quadtree(const Domain& domain, const RefinePredicate& refine, int max_level);

/// Enforce the two-to-one rule: no leaf is edge-adjacent to a leaf more than
/// one level finer. Idempotent; always succeeds by further refinement.
QuadtreeMesh balance_two_to_one(const QuadtreeMesh& mesh);

/// One polygon per leaf: corner nodes plus edge-interior hanging nodes, CCW.
std::vector<PolygonElement> extract_polygon_elements(const QuadtreeMesh& mesh);

/// Ids of nodes with a coordinate on the domain boundary.
std::set<int> boundary_nodes(const QuadtreeMesh& mesh);

}  // namespace qfem
