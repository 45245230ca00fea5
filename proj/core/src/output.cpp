#include "rdafem/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rdafem {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw OutputError("cannot create directory " + target.parent_path().string());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw OutputError("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out) throw OutputError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw OutputError("rename failed for " + target.string() + ": " + ec.message());
}

std::string diagnostics_csv_header() {
    return "t,dofs,eta_global,delta_u,domain_measure,adapt_iterations\n";
}

std::string diagnostics_csv_row(const StepRecord& rec) {
    std::ostringstream os;
    os << fmt(rec.t) << ',' << rec.dofs << ',' << fmt(rec.eta_global) << ',' << fmt(rec.delta_u)
       << ',' << fmt(rec.domain_measure) << ',' << rec.adapt_iterations << '\n';
    return os.str();
}

std::string snapshot_text(const SystemState& state, const ReferenceMesh& mesh,
                          const DomainMap& map, const IndicatorField& field) {
    if (state.mesh_version != mesh.version() || field.mesh_version != mesh.version())
        throw OutputError("snapshot: state/field/mesh version mismatch");
    const int nv = mesh.vertex_count();
    const int ne = mesh.element_count();

    std::ostringstream os;
    os << "# vtk DataFile Version 3.0\n";
    os << "rdafem snapshot t=" << fmt9(state.t) << "\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";

    os << "POINTS " << nv << " double\n";
    for (int v = 0; v < nv; ++v) {
        const Vec2& p = mesh.vertex(v);
        os << fmt9(p.x()) << ' ' << fmt9(p.y()) << " 0\n";
    }

    os << "CELLS " << ne << ' ' << 4 * ne << "\n";
    for (int e = 0; e < ne; ++e) {
        const auto v = mesh.element(e);
        os << "3 " << v[0] << ' ' << v[1] << ' ' << v[2] << "\n";
    }
    os << "CELL_TYPES " << ne << "\n";
    for (int e = 0; e < ne; ++e) os << "5\n";

    os << "POINT_DATA " << nv << "\n";
    for (int i = 0; i < state.species(); ++i) {
        os << "SCALARS u" << (i + 1) << " double 1\nLOOKUP_TABLE default\n";
        for (int v = 0; v < nv; ++v) os << fmt9(state.u[i][v]) << "\n";
    }
    os << "VECTORS physical double\n";
    for (int v = 0; v < nv; ++v) {
        const Vec3 x = map.map_eval(mesh.vertex(v), state.t);
        os << fmt9(x.x()) << ' ' << fmt9(x.y()) << ' ' << fmt9(x.z()) << "\n";
    }

    os << "CELL_DATA " << ne << "\n";
    os << "SCALARS eta double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < ne; ++e) os << fmt9(field.eta_element[e]) << "\n";

    return os.str();
}

void write_snapshot(const SystemState& state, const ReferenceMesh& mesh, const DomainMap& map,
                    const IndicatorField& field, const std::string& path) {
    atomic_write(path, snapshot_text(state, mesh, map, field));
}

}  // namespace rdafem
