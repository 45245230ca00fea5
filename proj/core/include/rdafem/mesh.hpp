#pragma once

#include "rdafem/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rdafem {

class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Element index sets driving one adaptation pass. Refine and coarsen sets
/// must be disjoint.
struct MarkSet {
    std::vector<int> refine;
    std::vector<int> coarsen;

    /// Throws MeshError when the two sets intersect.
    void validate() const;
};

/// Conforming triangulation of the reference square [0,1]^2 with
/// newest-vertex bisection refinement and inverse-bisection coarsening.
///
/// Triangles store their vertices as (v0, v1, v2) where (v0, v1) is the
/// refinement edge and v2 the peak (newest vertex). Bisection inserts the
/// midpoint m of (v0, v1) and replaces the triangle by (v2, v0, m) and
/// (v1, v2, m); conformity is restored by recursive closure. The full
/// bisection forest is kept so that coarsening can merge sibling pairs
/// back into their parent, never descending below the initial mesh.
///
/// Value type: refine/coarsen return new meshes. Each mesh remembers how
/// its vertices derive from the predecessor version so that P1
/// coefficient vectors can be transferred exactly.
///
/// Mutation is single-threaded; a mesh that is not being mutated is safe
/// to read concurrently.
class ReferenceMesh {
public:
    /// Uniform triangulation of [0,1]^2: n x n cells split along the
    /// lower-left/upper-right diagonal, 2n^2 triangles. Refinement edges
    /// start on the longest edge (ties by lowest vertex-index pair).
    static ReferenceMesh unit_square(int n);

    std::uint64_t version() const { return version_; }
    std::uint64_t parent_version() const { return parent_version_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const Vec2& vertex(int v) const { return vertices_[v]; }

    int element_count() const { return static_cast<int>(leaf_of_element_.size()); }
    std::array<int, 3> element(int e) const { return tris_[leaf_of_element_[e]].v; }
    double element_area(int e) const;
    /// Longest edge length (the diameter used by the error indicator).
    double element_diameter(int e) const;
    int element_generation(int e) const { return tris_[leaf_of_element_[e]].generation; }
    /// Mesh version at which this element was created by refinement.
    std::uint64_t element_birth_version(int e) const { return tris_[leaf_of_element_[e]].birth; }
    /// The other child of this element's parent, if that child is itself
    /// a leaf (the pair is then a coarsening candidate).
    std::optional<int> sibling(int e) const;

    struct Edge {
        int a = -1, b = -1;     // vertex ids, a < b
        int left = -1;          // adjacent element
        int right = -1;         // second adjacent element, -1 on the boundary
        bool boundary() const { return right < 0; }
    };
    std::span<const Edge> edges() const { return edges_; }
    /// Edge ids of element e; entry k is the edge between local vertices
    /// k and (k+1) % 3.
    const std::array<int, 3>& element_edges(int e) const { return element_edges_[e]; }
    /// Element on the other side of edge `edge` as seen from element e,
    /// or nullopt on the boundary.
    std::optional<int> neighbor(int e, int edge) const;

    /// Bisect every element in marks.refine at least once; closure keeps
    /// the mesh conforming. Version increments, coarsen marks are ignored.
    /// If given, old_to_new maps surviving old element ids to new ids
    /// (-1 where the element was bisected).
    ReferenceMesh refined(const MarkSet& marks, std::vector<int>* old_to_new = nullptr) const;

    /// Merge sibling pairs whose members are all in marks.coarsen and whose
    /// removal keeps the mesh conforming; cascades as merges enable further
    /// merges (a merged parent counts as marked when both its children
    /// were). Never coarsens generation-0 elements; unusable marks are
    /// skipped silently. old_to_new is -1 for merged-away elements.
    ReferenceMesh coarsened(const MarkSet& marks, std::vector<int>* old_to_new = nullptr) const;

    /// Same mesh with elements renumbered by `perm` (new index i holds old
    /// element perm[i]); vertices, dofs and the version are unchanged.
    ReferenceMesh with_permuted_elements(std::span<const int> perm) const;

    /// Transfer P1 vertex coefficients from the immediate predecessor mesh
    /// (exact prolongation after refinement, vertex restriction after
    /// coarsening). Throws MeshError unless parent.version() is this
    /// mesh's parent version.
    std::vector<double> transfer_from_parent(const ReferenceMesh& parent,
                                             std::span<const double> coeffs) const;

    /// Checks conformity, orientation, area coverage and the
    /// shape-regularity floor; throws MeshError on violation.
    void validate() const;

    double min_interior_angle() const;
    double initial_min_angle() const { return initial_min_angle_; }
    double total_area() const;

private:
    struct Tri {
        std::array<int, 3> v{-1, -1, -1};
        int parent = -1;
        std::array<int, 2> child{-1, -1};
        std::int32_t generation = 0;
        std::uint64_t birth = 1;
        bool dead = false;
        bool leaf() const { return !dead && child[0] < 0; }
    };

    struct TransferPlan {
        enum class Kind { identity, refine, coarsen } kind = Kind::identity;
        int parent_vertex_count = 0;
        // refine: vertex parent_vertex_count + i is the midpoint of (a, b)
        std::vector<std::array<int, 2>> midpoints;
        // coarsen: new vertex i was parent vertex kept[i]
        std::vector<int> kept;
    };

    ReferenceMesh() = default;
    void rebuild_indices();

    std::vector<Vec2> vertices_;
    std::vector<Tri> tris_;
    std::vector<int> leaf_of_element_;  // element id -> tri record
    std::vector<int> element_of_leaf_;  // tri record -> element id (-1 if not a leaf)
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> element_edges_;
    std::uint64_t version_ = 1;
    std::uint64_t parent_version_ = 0;
    TransferPlan plan_;
    double initial_min_angle_ = 0.0;
};

// Spec-facing free functions.
ReferenceMesh initial_mesh(int n);
ReferenceMesh refine(const ReferenceMesh& mesh, const MarkSet& marks);
ReferenceMesh coarsen(const ReferenceMesh& mesh, const MarkSet& marks);
std::vector<double> interpolate_between(const ReferenceMesh& old_mesh,
                                        const ReferenceMesh& new_mesh,
                                        std::span<const double> coeffs);

}  // namespace rdafem
