// Command-line front end: quadtree mesh generation/export, patch-test runs,
// Poisson convergence studies, CSV emission.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "qfem/generators.hpp"
#include "qfem/mesh_io.hpp"
#include "qfem/solver.hpp"

namespace fs = std::filesystem;
using namespace qfem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CsvRow {
    std::string mesh_id;
    std::string generator;
    int depth = 0;
    bool balanced = true;
    std::string treatment;
    int n_dof = 0;
    std::string rel_l2_error;  // "-" for not-applicable entries
    std::string slope;         // optional
};

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    const fs::path out(path);
    if (out.has_parent_path() && !fs::exists(out.parent_path()))
        throw Error("output directory does not exist: " + out.parent_path().string());
    const fs::path tmp = out.string() + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw Error("cannot open output file: " + tmp.string());
        f << "mesh_id,generator,depth,balanced,treatment,n_dof,rel_l2_error,slope\n";
        for (const CsvRow& r : rows) {
            f << r.mesh_id << ',' << r.generator << ',' << r.depth << ','
              << (r.balanced ? "true" : "false") << ',' << r.treatment << ',' << r.n_dof << ','
              << r.rel_l2_error << ',' << r.slope << '\n';
        }
        if (!f) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, out);
}

std::string mesh_id_of(GeneratorKind gen, int depth, bool balanced) {
    return std::string(generator_name(gen)) + std::to_string(depth) + (balanced ? "b" : "u");
}

std::string format_error(double e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", e);
    return buf;
}

struct MeshArgs {
    std::string generator = "uniform";
    int depth = 2;
    bool balance = true;
};

void add_mesh_options(CLI::App* cmd, MeshArgs& args) {
    cmd->add_option("--gen", args.generator, "mesh generator: uniform|corner|diag|grad")
        ->check(CLI::IsMember({"uniform", "corner", "diag", "grad"}));
    cmd->add_option("--depth", args.depth, "refinement depth")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--balance,!--no-balance", args.balance, "enforce the two-to-one rule");
}

int cmd_mesh(const MeshArgs& margs, const std::string& out_base) {
    const Domain domain{{0.0, 0.0}, 1.0, 1.0};
    const GeneratorKind kind = parse_generator(margs.generator);
    const QuadtreeMesh mesh = make_mesh(kind, domain, margs.depth, margs.balance);
    const auto polys = extract_polygon_elements(mesh);

    const fs::path base(out_base);
    if (base.has_parent_path() && !fs::exists(base.parent_path()))
        throw Error("output directory does not exist: " + base.parent_path().string());
    write_mesh_json(mesh, polys, out_base + ".json");
    write_mesh_vtk(mesh, polys, out_base + ".vtk");
    std::printf("mesh %s: %d leaves, %d nodes, %zu hanging -> %s.{json,vtk}\n",
                mesh_id_of(kind, margs.depth, margs.balance).c_str(), mesh.leaf_count(),
                mesh.node_count(), mesh.hanging().size(), out_base.c_str());
    return kExitOk;
}

int cmd_validate(const std::string& in_path) {
    const ImportedMesh m = read_mesh_json(in_path);

    // adjacency from the polygon list: two polygons sharing a reversed
    // directed edge are edge-adjacent
    std::map<std::pair<int, int>, int> owner;
    for (std::size_t p = 0; p < m.polygons.size(); ++p) {
        const auto& nodes = m.polygons[p].nodes;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            owner[{nodes[i], nodes[(i + 1) % nodes.size()]}] = static_cast<int>(p);
        }
    }
    int max_gap = 0;
    for (const auto& [edge, p] : owner) {
        const auto rev = owner.find({edge.second, edge.first});
        if (rev == owner.end()) continue;
        max_gap = std::max(max_gap,
                           std::abs(m.polygons[p].level - m.polygons[rev->second].level));
    }
    // hanging consistency: each hanging node lies strictly inside its master segment
    int bad_hanging = 0;
    for (const auto& [node, masters] : m.hanging) {
        const Vec2 p = m.nodes[node];
        const Vec2 a = m.nodes[masters.first];
        const Vec2 b = m.nodes[masters.second];
        const double len = distance(a, b);
        if (std::abs(cross(p - a, b - a)) > 1e-12 * len) ++bad_hanging;
        const double t = dot(p - a, b - a) / (len * len);
        if (!(t > 0.0 && t < 1.0)) ++bad_hanging;
    }
    std::printf("validate %s: %zu polygons, %zu nodes, max adjacent level gap %d, "
                "%d bad hanging entries, balanced flag %s\n",
                in_path.c_str(), m.polygons.size(), m.nodes.size(), max_gap, bad_hanging,
                m.balanced ? "true" : "false");
    if (bad_hanging > 0 || max_gap > 1) {
        std::printf("validate: FAILED (two-to-one %s, hanging map %s)\n",
                    max_gap > 1 ? "violated" : "ok", bad_hanging ? "inconsistent" : "ok");
        return kExitRuntime;
    }
    std::printf("validate: OK\n");
    return kExitOk;
}

int cmd_patchtest(const MeshArgs& margs, const std::string& case_name,
                  const std::vector<std::string>& treatments, const std::vector<int>& depths,
                  const std::string& out_path) {
    const Domain domain{{0.0, 0.0}, 1.0, 1.0};
    const GeneratorKind kind = parse_generator(margs.generator);
    const PatchCase pcase = case_name == "A" ? PatchCase::LinearA : PatchCase::QuadraticB;
    const std::vector<int> run_depths = depths.empty() ? std::vector<int>{margs.depth} : depths;

    const fs::path outp(out_path);
    if (outp.has_parent_path() && !fs::exists(outp.parent_path()))
        throw Error("output directory does not exist: " + outp.parent_path().string());
    std::vector<CsvRow> rows;
    std::ofstream log(out_path + ".log");
    for (int depth : run_depths) {
        const QuadtreeMesh mesh = make_mesh(kind, domain, depth, margs.balance);
        for (const std::string& tname : treatments) {
            const TreatmentKind t = parse_treatment(tname);
            const std::string mesh_id = mesh_id_of(kind, depth, margs.balance);
            CsvRow row{mesh_id, generator_name(kind), depth,
                       margs.balance, tname, mesh.node_count(), "-", ""};
            try {
                const ErrorReport rep = run_patch_test(pcase, mesh, t);
                row.rel_l2_error = format_error(rep.rel_l2);
                log << "solve " << mesh_id << " " << tname << ": n_dof=" << rep.n_dof
                    << " residual=" << format_error(rep.solver_residual)
                    << " rel_l2=" << format_error(rep.rel_l2) << "\n";
            } catch (const TreatmentNotApplicableError& e) {
                row.rel_l2_error = "-";  // matches the table convention
                log << "skip " << mesh_id << " " << tname << ": " << e.what() << "\n";
            }
            rows.push_back(row);
        }
    }
    write_csv(out_path, rows);
    std::printf("patchtest case %s: %zu rows -> %s (diagnostics in %s.log)\n", case_name.c_str(),
                rows.size(), out_path.c_str(), out_path.c_str());
    return kExitOk;
}

int cmd_poisson(const MeshArgs& margs, const std::vector<std::string>& treatments,
                std::vector<int> depths, const std::string& out_path) {
    const Domain domain{{0.0, 0.0}, 1.0, 1.0};
    const GeneratorKind kind = parse_generator(margs.generator);
    if (depths.empty()) depths = {2, 3, 4};

    const fs::path outp(out_path);
    if (outp.has_parent_path() && !fs::exists(outp.parent_path()))
        throw Error("output directory does not exist: " + outp.parent_path().string());
    std::vector<QuadtreeMesh> meshes;
    for (int depth : depths) meshes.push_back(make_mesh(kind, domain, depth, margs.balance));

    std::vector<CsvRow> rows;
    std::ofstream log(out_path + ".log");
    for (const std::string& tname : treatments) {
        const TreatmentKind t = parse_treatment(tname);
        const ConvergenceResult res = run_poisson_convergence(meshes, t);
        for (std::size_t i = 0; i < res.reports.size(); ++i) {
            const std::string mesh_id = mesh_id_of(kind, depths[i], margs.balance);
            CsvRow row{mesh_id, generator_name(kind),
                       depths[i], margs.balance, tname, res.reports[i].n_dof,
                       format_error(res.reports[i].rel_l2), ""};
            if (i + 1 == res.reports.size()) row.slope = format_error(res.slope);
            rows.push_back(row);
            log << "solve " << mesh_id << " " << tname << ": n_dof=" << res.reports[i].n_dof
                << " h=" << format_error(res.h[i])
                << " residual=" << format_error(res.reports[i].solver_residual)
                << " rel_l2=" << format_error(res.reports[i].rel_l2) << "\n";
        }
    }
    write_csv(out_path, rows);
    std::printf("poisson: %zu rows -> %s (diagnostics in %s.log)\n", rows.size(),
                out_path.c_str(), out_path.c_str());
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& treatments, const std::string& out_dir) {
    if (!fs::exists(out_dir) || !fs::is_directory(out_dir))
        throw Error("output directory does not exist: " + out_dir);
    MeshArgs corner{"corner", 3, true};
    const std::vector<int> depths{1, 2, 3};
    int rc = cmd_patchtest(corner, "A", treatments, depths,
                           (fs::path(out_dir) / "patch_a.csv").string());
    if (rc != kExitOk) return rc;
    rc = cmd_patchtest(corner, "B", treatments, depths,
                       (fs::path(out_dir) / "patch_b.csv").string());
    if (rc != kExitOk) return rc;
    MeshArgs uniform{"uniform", 0, true};
    return cmd_poisson(uniform, treatments, {2, 3, 4, 5},
                       (fs::path(out_dir) / "poisson.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadtree finite-element workbench"};
    app.require_subcommand(1);

    MeshArgs mesh_args, patch_args, poisson_args;
    std::string out_path, in_path, case_name = "A", out_dir = ".";
    std::vector<std::string> treatments;
    std::vector<int> depths;

    CLI::App* mesh = app.add_subcommand("mesh", "generate and export a quadtree mesh");
    add_mesh_options(mesh, mesh_args);
    mesh->add_option("--out", out_path, "output base path (.json and .vtk are appended)")
        ->required();

    CLI::App* validate = app.add_subcommand("validate", "check an exported mesh JSON file");
    validate->add_option("--in", in_path, "mesh JSON file")->required();

    CLI::App* patch = app.add_subcommand("patchtest", "run Laplace patch tests, emit CSV");
    add_mesh_options(patch, patch_args);
    patch->add_option("--case", case_name, "patch case: A (linear) or B (quadratic)")
        ->check(CLI::IsMember({"A", "B"}));
    patch->add_option("--treatment", treatments,
                      "treatment (repeatable): fem|pfem|nsfem1|nsfemn|sbfem");
    patch->add_option("--depths", depths, "depth list (overrides --depth)");
    patch->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* poisson = app.add_subcommand("poisson", "run the Poisson convergence study");
    add_mesh_options(poisson, poisson_args);
    poisson->add_option("--treatment", treatments,
                        "treatment (repeatable): fem|pfem|nsfem1|nsfemn|sbfem");
    poisson->add_option("--depths", depths, "depth list, coarse to fine");
    poisson->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* compare = app.add_subcommand("compare", "patch tests + Poisson study in one go");
    compare->add_option("--treatment", treatments,
                        "treatment (repeatable): fem|pfem|nsfem1|nsfemn|sbfem");
    compare->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (mesh->parsed()) return cmd_mesh(mesh_args, out_path);
        if (validate->parsed()) return cmd_validate(in_path);
        if (patch->parsed() || poisson->parsed() || compare->parsed()) {
            if (treatments.empty()) {
                std::fprintf(stderr, "error: at least one --treatment is required\n");
                return kExitUsage;
            }
            if (patch->parsed())
                return cmd_patchtest(patch_args, case_name, treatments, depths, out_path);
            if (poisson->parsed())
                return cmd_poisson(poisson_args, treatments, depths, out_path);
            return cmd_compare(treatments, out_dir);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
