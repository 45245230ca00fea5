#include "rdafem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace rdafem {

namespace {

inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

inline double signed_area(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    return 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
}

// Tracks leaf triangles adjacent to each edge while the forest is mutated.
class EdgeAdjacency {
public:
    void add(std::uint64_t key, int tri) {
        auto& slot = map_.try_emplace(key, std::array<int, 2>{-1, -1}).first->second;
        if (slot[0] < 0) {
            slot[0] = tri;
        } else if (slot[1] < 0) {
            slot[1] = tri;
        } else {
            throw MeshError("edge shared by more than two triangles");
        }
    }
    void remove(std::uint64_t key, int tri) {
        auto it = map_.find(key);
        if (it == map_.end()) throw MeshError("edge adjacency bookkeeping lost an edge");
        auto& slot = it->second;
        if (slot[0] == tri) {
            slot[0] = slot[1];
            slot[1] = -1;
        } else if (slot[1] == tri) {
            slot[1] = -1;
        } else {
            throw MeshError("edge adjacency bookkeeping lost a triangle");
        }
        if (slot[0] < 0) map_.erase(it);
    }
    int other(std::uint64_t key, int tri) const {
        auto it = map_.find(key);
        if (it == map_.end()) return -1;
        const auto& slot = it->second;
        if (slot[0] == tri) return slot[1];
        if (slot[1] == tri) return slot[0];
        return slot[0];
    }

private:
    struct Hash {
        std::size_t operator()(std::uint64_t k) const { return std::hash<std::uint64_t>()(k); }
    };
    std::unordered_map<std::uint64_t, std::array<int, 2>, Hash> map_{};
};

}  // namespace

void MarkSet::validate() const {
    std::vector<int> a = refine, b = coarsen;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    if (!both.empty())
        throw MeshError("mark set: element " + std::to_string(both.front()) +
                        " is marked for both refinement and coarsening");
}

ReferenceMesh ReferenceMesh::unit_square(int n) {
    if (n < 1) throw MeshError("unit_square: subdivision count must be >= 1");
    ReferenceMesh m;
    m.vertices_.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            m.vertices_.emplace_back(double(i) / n, double(j) / n);

    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    auto add_tri = [&m](std::array<int, 3> v) {
        // rotate so that the refinement edge (v0, v1) is the longest edge;
        // ties broken by the lowest (min,max) vertex-index pair
        double best_len = -1.0;
        std::pair<int, int> best_pair{0, 0};
        int best_k = 0;
        for (int k = 0; k < 3; ++k) {
            const int a = v[k], b = v[(k + 1) % 3];
            const double len = (m.vertices_[a] - m.vertices_[b]).norm();
            std::pair<int, int> pair{std::min(a, b), std::max(a, b)};
            if (len > best_len + 1e-15 || (std::abs(len - best_len) <= 1e-15 && pair < best_pair)) {
                best_len = len;
                best_pair = pair;
                best_k = k;
            }
        }
        Tri t;
        for (int k = 0; k < 3; ++k) t.v[k] = v[(best_k + k) % 3];
        m.tris_.push_back(t);
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int ll = vid(i, j), lr = vid(i + 1, j), ul = vid(i, j + 1), ur = vid(i + 1, j + 1);
            add_tri({ll, lr, ur});
            add_tri({ll, ur, ul});
        }
    }
    m.rebuild_indices();
    m.initial_min_angle_ = m.min_interior_angle();
    return m;
}

double ReferenceMesh::element_area(int e) const {
    const auto& t = tris_[leaf_of_element_[e]];
    return signed_area(vertices_[t.v[0]], vertices_[t.v[1]], vertices_[t.v[2]]);
}

double ReferenceMesh::element_diameter(int e) const {
    const auto& t = tris_[leaf_of_element_[e]];
    double d = 0.0;
    for (int k = 0; k < 3; ++k)
        d = std::max(d, (vertices_[t.v[k]] - vertices_[t.v[(k + 1) % 3]]).norm());
    return d;
}

std::optional<int> ReferenceMesh::sibling(int e) const {
    const int rec = leaf_of_element_[e];
    const int p = tris_[rec].parent;
    if (p < 0) return std::nullopt;
    const auto& pc = tris_[p].child;
    const int other = (pc[0] == rec) ? pc[1] : pc[0];
    if (other < 0 || !tris_[other].leaf()) return std::nullopt;
    const int oe = element_of_leaf_[other];
    if (oe < 0) return std::nullopt;
    return oe;
}

std::optional<int> ReferenceMesh::neighbor(int e, int edge) const {
    const Edge& ed = edges_[edge];
    if (ed.left == e) return ed.boundary() ? std::nullopt : std::optional<int>(ed.right);
    return std::optional<int>(ed.left);
}

void ReferenceMesh::rebuild_indices() {
    leaf_of_element_.clear();
    element_of_leaf_.assign(tris_.size(), -1);
    for (int r = 0; r < static_cast<int>(tris_.size()); ++r) {
        if (tris_[r].leaf()) {
            element_of_leaf_[r] = static_cast<int>(leaf_of_element_.size());
            leaf_of_element_.push_back(r);
        }
    }

    edges_.clear();
    element_edges_.assign(leaf_of_element_.size(), {-1, -1, -1});
    std::unordered_map<std::uint64_t, int> edge_id;
    edge_id.reserve(leaf_of_element_.size() * 2);
    for (int e = 0; e < element_count(); ++e) {
        const auto& t = tris_[leaf_of_element_[e]];
        for (int k = 0; k < 3; ++k) {
            const int a = t.v[k], b = t.v[(k + 1) % 3];
            const auto key = edge_key(a, b);
            auto it = edge_id.find(key);
            if (it == edge_id.end()) {
                Edge ed;
                ed.a = std::min(a, b);
                ed.b = std::max(a, b);
                ed.left = e;
                edge_id.emplace(key, static_cast<int>(edges_.size()));
                element_edges_[e][k] = static_cast<int>(edges_.size());
                edges_.push_back(ed);
            } else {
                Edge& ed = edges_[it->second];
                if (ed.right >= 0) throw MeshError("edge shared by more than two triangles");
                ed.right = e;
                element_edges_[e][k] = it->second;
            }
        }
    }
}

ReferenceMesh ReferenceMesh::refined(const MarkSet& marks, std::vector<int>* old_to_new) const {
    marks.validate();
    ReferenceMesh out = *this;
    out.parent_version_ = version_;
    out.version_ = version_ + 1;
    out.plan_ = TransferPlan{};
    out.plan_.kind = TransferPlan::Kind::refine;
    out.plan_.parent_vertex_count = vertex_count();

    std::vector<int> targets;
    targets.reserve(marks.refine.size());
    for (int e : marks.refine) {
        if (e < 0 || e >= element_count()) throw MeshError("refine: element index out of range");
        targets.push_back(leaf_of_element_[e]);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    EdgeAdjacency adj;
    for (int r = 0; r < static_cast<int>(out.tris_.size()); ++r) {
        if (!out.tris_[r].leaf()) continue;
        const auto& v = out.tris_[r].v;
        for (int k = 0; k < 3; ++k) adj.add(edge_key(v[k], v[(k + 1) % 3]), r);
    }

    auto split_one = [&out, &adj](int rec, int mid) {
        Tri& t = out.tris_[rec];
        const int c0 = static_cast<int>(out.tris_.size());
        Tri a, b;
        a.v = {t.v[2], t.v[0], mid};
        b.v = {t.v[1], t.v[2], mid};
        a.parent = b.parent = rec;
        a.generation = b.generation = t.generation + 1;
        a.birth = b.birth = out.version_;
        t.child = {c0, c0 + 1};
        for (int k = 0; k < 3; ++k) adj.remove(edge_key(t.v[k], t.v[(k + 1) % 3]), rec);
        out.tris_.push_back(a);
        out.tris_.push_back(b);
        for (int c : {c0, c0 + 1}) {
            const auto& v = out.tris_[c].v;
            for (int k = 0; k < 3; ++k) adj.add(edge_key(v[k], v[(k + 1) % 3]), c);
        }
    };

    // Bisect `rec`, recursively forcing the neighbour across the refinement
    // edge into a compatible state first. Compatible pairs split together
    // around a shared midpoint, which is what keeps the mesh conforming.
    auto ensure_bisected = [&](int rec) {
        std::vector<int> stack{rec};
        std::size_t steps = 0;
        while (!stack.empty()) {
            if (++steps > 8 * out.tris_.size() + 1024)
                throw MeshError("bisection closure did not terminate; incompatible edge marks");
            const int t = stack.back();
            if (!out.tris_[t].leaf()) {
                stack.pop_back();
                continue;
            }
            const auto v = out.tris_[t].v;
            const auto key = edge_key(v[0], v[1]);
            const int partner = adj.other(key, t);
            if (partner >= 0) {
                const auto& pv = out.tris_[partner].v;
                if (edge_key(pv[0], pv[1]) != key) {
                    stack.push_back(partner);
                    continue;
                }
            }
            stack.pop_back();
            const int mid = static_cast<int>(out.vertices_.size());
            out.vertices_.push_back(0.5 * (out.vertices_[v[0]] + out.vertices_[v[1]]));
            out.plan_.midpoints.push_back({v[0], v[1]});
            split_one(t, mid);
            if (partner >= 0) split_one(partner, mid);
        }
    };

    for (int rec : targets) {
        if (out.tris_[rec].leaf()) ensure_bisected(rec);
    }

    out.rebuild_indices();
    if (old_to_new) {
        old_to_new->assign(element_count(), -1);
        for (int e = 0; e < element_count(); ++e) {
            const int rec = leaf_of_element_[e];
            if (out.tris_[rec].leaf()) (*old_to_new)[e] = out.element_of_leaf_[rec];
        }
    }
    return out;
}

ReferenceMesh ReferenceMesh::coarsened(const MarkSet& marks, std::vector<int>* old_to_new) const {
    marks.validate();
    ReferenceMesh out = *this;
    out.parent_version_ = version_;
    out.version_ = version_ + 1;

    std::vector<char> marked(out.tris_.size(), 0);
    for (int e : marks.coarsen) {
        if (e < 0 || e >= element_count()) throw MeshError("coarsen: element index out of range");
        marked[leaf_of_element_[e]] = 1;
    }

    // Iterate until no bisection vertex can be removed. A vertex m is
    // removable when every leaf touching m has m as its peak, those leaves
    // are the complete child sets of one (boundary) or two (interior)
    // parents, and all of them are marked. A parent recreated by a merge
    // inherits the mark only when it was born in the same refinement wave
    // as its children, so one coarsen call collapses multi-level closure
    // cascades of a single refine call but never tunnels past it.
    bool changed = true;
    while (changed) {
        changed = false;
        std::unordered_map<int, int> touch_count;
        std::unordered_map<int, std::vector<int>> peak_leaves;
        for (int r = 0; r < static_cast<int>(out.tris_.size()); ++r) {
            if (!out.tris_[r].leaf()) continue;
            const auto& v = out.tris_[r].v;
            for (int k = 0; k < 3; ++k) ++touch_count[v[k]];
            peak_leaves[v[2]].push_back(r);
        }

        std::vector<int> vertices_in_order;
        vertices_in_order.reserve(peak_leaves.size());
        for (const auto& [m, leaves] : peak_leaves) vertices_in_order.push_back(m);
        std::sort(vertices_in_order.begin(), vertices_in_order.end());

        for (int m : vertices_in_order) {
            const auto& leaves = peak_leaves[m];
            if (static_cast<int>(leaves.size()) != touch_count[m]) continue;
            if (leaves.size() != 2 && leaves.size() != 4) continue;

            bool ok = true;
            std::vector<int> parents;
            for (int r : leaves) {
                if (!marked[r] || out.tris_[r].parent < 0) {
                    ok = false;
                    break;
                }
                const int p = out.tris_[r].parent;
                if (std::find(parents.begin(), parents.end(), p) == parents.end())
                    parents.push_back(p);
            }
            if (!ok || parents.size() != leaves.size() / 2) continue;
            for (int p : parents) {
                const auto& c = out.tris_[p].child;
                if (c[0] < 0 || c[1] < 0 || !out.tris_[c[0]].leaf() || !out.tris_[c[1]].leaf() ||
                    !marked[c[0]] || !marked[c[1]]) {
                    ok = false;
                    break;
                }
                // the children must actually be the patch around m
                if (out.tris_[c[0]].v[2] != m || out.tris_[c[1]].v[2] != m) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;

            for (int p : parents) {
                const std::uint64_t wave = out.tris_[out.tris_[p].child[0]].birth;
                out.tris_[out.tris_[p].child[0]].dead = true;
                out.tris_[out.tris_[p].child[1]].dead = true;
                out.tris_[p].child = {-1, -1};
                if (out.tris_[p].birth == wave) marked[p] = 1;
            }
            changed = true;
        }
    }

    // compact the forest: keep leaves and their ancestors, drop merged
    // branches and orphaned midpoint vertices
    std::vector<char> keep_rec(out.tris_.size(), 0);
    for (int r = 0; r < static_cast<int>(out.tris_.size()); ++r) {
        if (!out.tris_[r].leaf()) continue;
        for (int a = r; a >= 0 && !keep_rec[a]; a = out.tris_[a].parent) keep_rec[a] = 1;
    }
    std::vector<int> rec_map(out.tris_.size(), -1);
    std::vector<Tri> new_tris;
    new_tris.reserve(out.tris_.size());
    for (int r = 0; r < static_cast<int>(out.tris_.size()); ++r) {
        if (!keep_rec[r]) continue;
        rec_map[r] = static_cast<int>(new_tris.size());
        new_tris.push_back(out.tris_[r]);
    }
    for (auto& t : new_tris) {
        if (t.parent >= 0) t.parent = rec_map[t.parent];
        for (int c = 0; c < 2; ++c)
            if (t.child[c] >= 0) t.child[c] = rec_map[t.child[c]];
    }

    std::vector<char> keep_vert(out.vertices_.size(), 0);
    for (const auto& t : new_tris) {
        if (!t.leaf()) continue;
        for (int k = 0; k < 3; ++k) keep_vert[t.v[k]] = 1;
    }
    std::vector<int> vert_map(out.vertices_.size(), -1);
    std::vector<Vec2> new_verts;
    TransferPlan plan;
    plan.kind = TransferPlan::Kind::coarsen;
    plan.parent_vertex_count = vertex_count();
    for (int v = 0; v < static_cast<int>(out.vertices_.size()); ++v) {
        if (!keep_vert[v]) continue;
        vert_map[v] = static_cast<int>(new_verts.size());
        new_verts.push_back(out.vertices_[v]);
        plan.kept.push_back(v);
    }
    for (auto& t : new_tris)
        for (int k = 0; k < 3; ++k) t.v[k] = vert_map[t.v[k]];

    out.tris_ = std::move(new_tris);
    out.vertices_ = std::move(new_verts);
    out.plan_ = std::move(plan);
    out.rebuild_indices();
    if (old_to_new) {
        old_to_new->assign(element_count(), -1);
        for (int e = 0; e < element_count(); ++e) {
            const int nr = rec_map[leaf_of_element_[e]];
            if (nr >= 0 && out.tris_[nr].leaf()) (*old_to_new)[e] = out.element_of_leaf_[nr];
        }
    }
    return out;
}

ReferenceMesh ReferenceMesh::with_permuted_elements(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != element_count())
        throw MeshError("element permutation has the wrong size");
    std::vector<char> seen(perm.size(), 0);
    ReferenceMesh out = *this;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const int e = perm[i];
        if (e < 0 || e >= element_count() || seen[e])
            throw MeshError("invalid element permutation");
        seen[e] = 1;
        out.leaf_of_element_[i] = leaf_of_element_[e];
    }
    for (int i = 0; i < out.element_count(); ++i) out.element_of_leaf_[out.leaf_of_element_[i]] = i;

    // rebuild edge tables so left/right follow the new ordering
    const auto records = out.leaf_of_element_;
    out.edges_.clear();
    out.element_edges_.assign(records.size(), {-1, -1, -1});
    std::unordered_map<std::uint64_t, int> edge_id;
    for (int e = 0; e < out.element_count(); ++e) {
        const auto& t = out.tris_[records[e]];
        for (int k = 0; k < 3; ++k) {
            const int a = t.v[k], b = t.v[(k + 1) % 3];
            const auto key = edge_key(a, b);
            auto it = edge_id.find(key);
            if (it == edge_id.end()) {
                Edge ed;
                ed.a = std::min(a, b);
                ed.b = std::max(a, b);
                ed.left = e;
                edge_id.emplace(key, static_cast<int>(out.edges_.size()));
                out.element_edges_[e][k] = static_cast<int>(out.edges_.size());
                out.edges_.push_back(ed);
            } else {
                out.edges_[it->second].right = e;
                out.element_edges_[e][k] = it->second;
            }
        }
    }
    return out;
}

std::vector<double> ReferenceMesh::transfer_from_parent(const ReferenceMesh& parent,
                                                        std::span<const double> coeffs) const {
    if (parent.version() != parent_version_)
        throw MeshError("transfer: mesh is not derived from the given parent (version mismatch)");
    if (static_cast<int>(coeffs.size()) != parent.vertex_count())
        throw MeshError("transfer: coefficient vector does not match the parent mesh");

    switch (plan_.kind) {
        case TransferPlan::Kind::identity:
            return std::vector<double>(coeffs.begin(), coeffs.end());
        case TransferPlan::Kind::refine: {
            std::vector<double> out(coeffs.begin(), coeffs.end());
            out.resize(vertex_count());
            for (std::size_t i = 0; i < plan_.midpoints.size(); ++i) {
                const auto [a, b] = plan_.midpoints[i];
                out[plan_.parent_vertex_count + i] = 0.5 * (out[a] + out[b]);
            }
            return out;
        }
        case TransferPlan::Kind::coarsen: {
            std::vector<double> out(vertex_count());
            for (int i = 0; i < vertex_count(); ++i) out[i] = coeffs[plan_.kept[i]];
            return out;
        }
    }
    throw MeshError("unreachable transfer plan");
}

double ReferenceMesh::min_interior_angle() const {
    double best = 4.0;  // > pi
    for (int e = 0; e < element_count(); ++e) {
        const auto v = element(e);
        for (int k = 0; k < 3; ++k) {
            const Vec2& p = vertices_[v[k]];
            const Vec2 u = (vertices_[v[(k + 1) % 3]] - p).normalized();
            const Vec2 w = (vertices_[v[(k + 2) % 3]] - p).normalized();
            best = std::min(best, std::acos(std::clamp(u.dot(w), -1.0, 1.0)));
        }
    }
    return best;
}

double ReferenceMesh::total_area() const {
    double a = 0.0;
    for (int e = 0; e < element_count(); ++e) a += element_area(e);
    return a;
}

void ReferenceMesh::validate() const {
    for (int e = 0; e < element_count(); ++e) {
        const auto v = element(e);
        for (int k = 0; k < 3; ++k)
            if (v[k] < 0 || v[k] >= vertex_count())
                throw MeshError("vertex index out of range");
        if (element_area(e) <= 0.0) throw MeshError("non-positively oriented triangle");
    }

    auto on_boundary = [this](const Edge& ed) {
        const Vec2& a = vertices_[ed.a];
        const Vec2& b = vertices_[ed.b];
        for (double c : {0.0, 1.0}) {
            if (std::abs(a.x() - c) < 1e-13 && std::abs(b.x() - c) < 1e-13) return true;
            if (std::abs(a.y() - c) < 1e-13 && std::abs(b.y() - c) < 1e-13) return true;
        }
        return false;
    };
    for (const auto& ed : edges_) {
        if (ed.boundary() && !on_boundary(ed))
            throw MeshError("interior edge with a single adjacent triangle (hanging node)");
    }

    if (std::abs(total_area() - 1.0) > 1e-12)
        throw MeshError("triangle areas do not cover the unit square");

    if (initial_min_angle_ > 0.0 && min_interior_angle() < 0.5 * initial_min_angle_ - 1e-12)
        throw MeshError("shape regularity degraded below the bisection floor");

    std::vector<char> used(vertex_count(), 0);
    for (int e = 0; e < element_count(); ++e)
        for (int v : element(e)) used[v] = 1;
    for (int v = 0; v < vertex_count(); ++v)
        if (!used[v]) throw MeshError("orphaned vertex");
}

ReferenceMesh initial_mesh(int n) { return ReferenceMesh::unit_square(n); }

ReferenceMesh refine(const ReferenceMesh& mesh, const MarkSet& marks) {
    return mesh.refined(marks);
}

ReferenceMesh coarsen(const ReferenceMesh& mesh, const MarkSet& marks) {
    return mesh.coarsened(marks);
}

std::vector<double> interpolate_between(const ReferenceMesh& old_mesh,
                                        const ReferenceMesh& new_mesh,
                                        std::span<const double> coeffs) {
    return new_mesh.transfer_from_parent(old_mesh, coeffs);
}

}  // namespace rdafem
