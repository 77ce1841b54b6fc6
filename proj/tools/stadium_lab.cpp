// stadium_lab: command-line front end for the stadium numerical laboratory.
//
// Subcommands: mesh, solve, quasimode, observe, verify-identity, study, accept.
// Mode files are JSON (metadata + nodal vectors); meshes use the text mesh
// format.  STADLAB_OUT overrides any --out directory.

#include "stadlab/study.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stadlab;

namespace {

std::string out_override(const std::string& dir) {
    if (const char* env = std::getenv("STADLAB_OUT")) return env;
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Eigenpair: return "eigenpair";
        case Provenance::ExplicitQuasimode: return "explicit-quasimode";
        default: return "window-combination";
    }
}

Provenance provenance_from_name(const std::string& s) {
    if (s == "eigenpair") return Provenance::Eigenpair;
    if (s == "explicit-quasimode") return Provenance::ExplicitQuasimode;
    if (s == "window-combination") return Provenance::SpectralWindowCombination;
    throw std::runtime_error("unknown provenance: " + s);
}

void write_mode_file(const ModeField& mode, const std::string& path) {
    json j;
    j["format"] = "stadlab-mode 1";
    j["lambda"] = mode.lambda;
    j["f_norm"] = mode.f_norm;
    j["provenance"] = provenance_name(mode.provenance);
    j["vector"] = std::vector<double>(mode.vector.data(), mode.vector.data() + mode.vector.size());
    j["f"] = std::vector<double>(mode.f.data(), mode.f.data() + mode.f.size());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << j.dump() << "\n";
}

ModeField read_mode_file(const std::string& path) {
    const json j = json::parse(slurp(path));
    if (j.at("format").get<std::string>() != "stadlab-mode 1")
        throw std::runtime_error("unrecognized mode file: " + path);
    ModeField mode;
    mode.lambda = j.at("lambda").get<double>();
    mode.f_norm = j.at("f_norm").get<double>();
    mode.provenance = provenance_from_name(j.at("provenance").get<std::string>());
    const auto v = j.at("vector").get<std::vector<double>>();
    const auto f = j.at("f").get<std::vector<double>>();
    mode.vector = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
    mode.f = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<long>(f.size()));
    return mode;
}

MeshDomain domain_from_name(const std::string& s) {
    if (s == "stadium") return MeshDomain::Stadium;
    if (s == "rectangle") return MeshDomain::RectangleOnly;
    if (s == "disk") return MeshDomain::DiskOnly;
    throw std::runtime_error("unknown domain: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stadium numerical laboratory"};
    app.require_subcommand(1);
    // Keep -h free for the mesh-size flag.
    app.set_help_flag("--help", "print help");
    app.option_defaults()->configurable(false);

    // mesh
    auto* cmd_mesh = app.add_subcommand("mesh", "build and save a triangulation");
    cmd_mesh->set_help_flag("--help", "print help");
    std::string mesh_domain = "stadium", mesh_out = "mesh.txt";
    double alpha = 1.0, beta = 1.0, h = 0.05;
    int refinements = 0;
    cmd_mesh->add_option("--domain", mesh_domain, "stadium|rectangle|disk");
    cmd_mesh->add_option("--alpha", alpha);
    cmd_mesh->add_option("--beta", beta);
    cmd_mesh->add_option("--h", h, "target mesh size");
    cmd_mesh->add_option("--refine", refinements, "uniform refinement levels");
    cmd_mesh->add_option("--out", mesh_out);

    // solve
    auto* cmd_solve = app.add_subcommand("solve", "eigenpairs in a spectral window");
    std::string solve_mesh, solve_out = "modes";
    double center = 25.0, halfwidth = 5.0;
    int nindex = -1, max_count = 64;
    cmd_solve->add_option("--mesh", solve_mesh, "mesh file")->required();
    cmd_solve->add_option("--center", center, "window center (lambda^2)");
    cmd_solve->add_option("--halfwidth", halfwidth);
    cmd_solve->add_option("--n", nindex, "bouncing-ball index (overrides --center)");
    cmd_solve->add_option("--max", max_count);
    cmd_solve->add_option("--out", solve_out, "output directory");

    // quasimode
    auto* cmd_quasi = app.add_subcommand("quasimode", "explicit separable quasimode");
    int qn = 10;
    double qlo = -0.5, qhi = 0.5, qh = 0.0;
    std::string quasi_mesh, quasi_out = "quasimode.json";
    cmd_quasi->add_option("--mesh", quasi_mesh, "mesh file")->required();
    cmd_quasi->add_option("--n", qn, "transverse index");
    cmd_quasi->add_option("--support-lo", qlo);
    cmd_quasi->add_option("--support-hi", qhi);
    cmd_quasi->add_option("--out", quasi_out);
    (void)qh;

    // observe
    auto* cmd_obs = app.add_subcommand("observe", "mode observables as CSV");
    std::string obs_mode, obs_mesh, obs_out;
    double delta = 1.0, gamma1 = -0.5, gamma2 = 0.5;
    cmd_obs->add_option("--mode", obs_mode)->required();
    cmd_obs->add_option("--mesh", obs_mesh)->required();
    cmd_obs->add_option("--delta", delta);
    cmd_obs->add_option("--gamma1", gamma1);
    cmd_obs->add_option("--gamma2", gamma2);
    cmd_obs->add_option("--out", obs_out, "CSV path (default stdout)");

    // verify-identity
    auto* cmd_verify = app.add_subcommand("verify-identity", "Rellich identity report");
    std::string vf_field = "xdx", vf_mode, vf_mesh;
    cmd_verify->add_option("--field", vf_field, "xdx|radial|cutoffx|wingy");
    cmd_verify->add_option("--mode", vf_mode)->required();
    cmd_verify->add_option("--mesh", vf_mesh)->required();

    // study
    auto* cmd_study = app.add_subcommand("study", "sweep: solve, observe, verify, plot");
    std::string study_config, study_out;
    cmd_study->add_option("--config", study_config, "JSON config file");
    cmd_study->add_option("--out", study_out, "override output directory");

    // accept
    auto* cmd_accept = app.add_subcommand("accept", "run the acceptance suite");
    std::string accept_out = "acceptance_out";
    cmd_accept->add_option("--out", accept_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_mesh->parsed()) {
            TriMesh mesh = build_mesh(domain_from_name(mesh_domain), alpha, beta, h);
            for (int i = 0; i < refinements; ++i) mesh = refine(mesh);
            write_mesh_file(mesh, mesh_out);
            std::printf("mesh: %zu vertices, %zu triangles, area %.6f, min angle %.1f deg -> %s\n",
                        mesh.vertices.size(), mesh.triangles.size(), mesh.total_area(),
                        mesh.min_angle_deg(), mesh_out.c_str());
        } else if (cmd_solve->parsed()) {
            const TriMesh mesh = read_mesh_file(solve_mesh);
            const OperatorPair op = assemble(mesh);
            const SpectralWindow window = nindex >= 0
                                              ? bouncing_ball_window(nindex, mesh.beta, halfwidth)
                                              : SpectralWindow{center, halfwidth};
            const auto pairs = solve_window(mesh, op, window, max_count);
            const std::string dir = out_override(solve_out);
            fs::create_directories(dir);
            std::printf("window [%g, %g]: %zu eigenpairs\n", window.center - window.halfwidth,
                        window.center + window.halfwidth, pairs.size());
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const ModeField mode = mode_from_eigenpair(pairs[i], op);
                char name[64];
                std::snprintf(name, sizeof(name), "mode_%03zu.json", i);
                write_mode_file(mode, (fs::path(dir) / name).string());
                std::printf("  lambda^2 = %.12g  residual <= %.2e -> %s\n", pairs[i].lambdasq,
                            pairs[i].residual_bound, name);
            }
        } else if (cmd_quasi->parsed()) {
            const TriMesh mesh = read_mesh_file(quasi_mesh);
            const OperatorPair op = assemble(mesh);
            const ModeField mode = explicit_quasimode({qn, qlo, qhi}, mesh, op);
            write_mode_file(mode, quasi_out);
            std::printf("quasimode n=%d: lambda=%.6f, ||f||=%.6f (analytic ratio %.6f) -> %s\n",
                        qn, mode.lambda, mode.f_norm, mode.analytic_f_ratio, quasi_out.c_str());
        } else if (cmd_obs->parsed()) {
            const TriMesh mesh = read_mesh_file(obs_mesh);
            const OperatorPair op = assemble(mesh);
            const ModeField mode = read_mode_file(obs_mode);
            ObserveParams params{delta, gamma1, gamma2};
            const ObservableReport rep = observe(mode, mesh, op, params);
            std::ostringstream csv;
            csv << kObservableCsvHeader << "\n";
            write_observable_csv_row(csv, rep);
            if (obs_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(obs_out, std::ios::binary);
                out << csv.str();
            }
        } else if (cmd_verify->parsed()) {
            const TriMesh mesh = read_mesh_file(vf_mesh);
            const OperatorPair op = assemble(mesh);
            const ModeField mode = read_mode_file(vf_mode);
            const FieldKind kind = field_kind_from_name(vf_field);
            VectorFieldSpec field = VectorFieldSpec::xdx();
            if (kind == FieldKind::Radial) field = VectorFieldSpec::radial();
            if (kind == FieldKind::CutoffX) field = VectorFieldSpec::cutoff_x(mesh.alpha, mesh.beta);
            if (kind == FieldKind::WingY)
                field = VectorFieldSpec::wing_y(mesh.alpha, mesh.beta, mode.lambda);
            const RellichReport r = rellich_residual(mode, field, mesh, op);
            std::printf("field,lhs,rhs_volume,rhs_boundary,residual,relative\n");
            std::printf("%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", field_kind_name(r.kind), r.lhs,
                        r.rhs_volume, r.rhs_boundary, r.residual, r.relative());
        } else if (cmd_study->parsed()) {
            StudyConfig config;
            if (!study_config.empty()) config = config_from_json(slurp(study_config));
            if (!study_out.empty()) config.output_dir = study_out;
            config.output_dir = out_override(config.output_dir);
            const StudyResult result = run_study(config);
            std::printf("study: %zu modes -> %s (wing slope %.3f, flux slope %.3f)\n",
                        result.rows.size(), result.csv_path.c_str(), result.wing_fit.slope,
                        result.flux_fit.slope);
        } else if (cmd_accept->parsed()) {
            const std::string dir = out_override(accept_out);
            const auto results = acceptance(dir);
            for (const auto& r : results) {
                const char* status = !r.ran ? "NOT-RUN" : (r.passed ? "PASS" : "FAIL");
                std::printf("[%s] %2d %s: %s\n", status, r.id, r.name.c_str(), r.detail.c_str());
            }
            std::printf("manifest: %s/manifest.json\n", dir.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
