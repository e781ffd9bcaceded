// isotool — generate scalar volumes, extract iso-surfaces, measure meshes.
//
//   isotool gen      --object sphere --out data
//   isotool extract  --object sphere --method mc,mt5,mt6,ccl --out data
//   isotool compare  --out results
//   isotool sweep    --rmin 5 --rmax 30 --out results
//
// Every command is a pure function of (config, input files): re-running with
// the same configuration reproduces all outputs byte for byte, whatever
// --threads says. Exit codes: 0 success, 1 usage/config error, 2 data error.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isomesh/extract.hpp"
#include "isomesh/field.hpp"
#include "isomesh/mesh.hpp"
#include "isomesh/mesh_io.hpp"
#include "isomesh/metrics.hpp"
#include "isomesh/raw_io.hpp"
#include "isomesh/report.hpp"

namespace fs = std::filesystem;
using namespace isomesh;

namespace {

const std::vector<std::string> kDefaultObjects = {"sphere", "noisedsph", "cube",
                                                  "csph",   "torus",    "sombrero"};

struct RunConfig {
    std::vector<std::string> objects;  // empty: command default
    std::array<int, 3> dims{0, 0, 0};  // 0: per-object default (64^3; torus 160^3; sweep 72^3)
    double threshold = 0.0;
    std::vector<std::string> methods{"mc", "mt5", "mt6", "ccl"};
    std::optional<double> noise_percent;  // unset: 10 for noisedsph, 0 otherwise
    uint64_t seed = 1;
    double density = 4.0;  // surface samples per unit area for hausdorff/rms
    std::string out = ".";
    bool paper_rms = false;  // emit sqrt(sum x^2)/n instead of sqrt(mean x^2)
    std::string format = "obj";
    bool swap_torus = false;  // swap main/secondary radii (printed values self-intersect)
    double radius = 25.0;     // sphere / csph sphere
    double edge = 42.0;       // cube / csph cube
    double torus_c = 20.0;    // main radius
    double torus_a = 42.0;    // secondary radius
    int rmin = 5, rmax = 30;  // sweep radius range
    std::string dtype = "f32";
    std::string volume;  // extract: explicit descriptor path
    unsigned threads = 0;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::array<int, 3> parse_dims(const std::string& s) {
    std::array<int, 3> d{0, 0, 0};
    char sep = s.find('x') != std::string::npos ? 'x' : ',';
    std::stringstream ss(s);
    std::string item;
    std::vector<int> parts;
    while (std::getline(ss, item, sep)) parts.push_back(std::stoi(item));
    if (parts.size() == 1) return {parts[0], parts[0], parts[0]};
    if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
    throw std::invalid_argument("dims wants N or NXxNYxNZ, got: " + s);
}

// Strict config reader: every key must be known, so typos fail loudly
// instead of silently running defaults.
void load_config_file(const fs::path& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config parse: " + std::string(e.what()));
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "object" || key == "objects") {
                cfg.objects = val.is_array() ? val.get<std::vector<std::string>>()
                                             : split_list(val.get<std::string>());
            } else if (key == "dims") {
                if (val.is_number_integer()) {
                    int n = val.get<int>();
                    cfg.dims = {n, n, n};
                } else if (val.is_array() && val.size() == 3) {
                    cfg.dims = {val[0].get<int>(), val[1].get<int>(), val[2].get<int>()};
                } else {
                    throw std::invalid_argument("config dims wants an int or [nx,ny,nz]");
                }
            } else if (key == "threshold") {
                cfg.threshold = val.get<double>();
            } else if (key == "method" || key == "methods") {
                cfg.methods = val.is_array() ? val.get<std::vector<std::string>>()
                                             : split_list(val.get<std::string>());
            } else if (key == "noise_percent") {
                cfg.noise_percent = val.get<double>();
            } else if (key == "seed") {
                cfg.seed = val.get<uint64_t>();
            } else if (key == "density") {
                cfg.density = val.get<double>();
            } else if (key == "out") {
                cfg.out = val.get<std::string>();
            } else if (key == "paper_rms") {
                cfg.paper_rms = val.get<bool>();
            } else if (key == "format") {
                cfg.format = val.get<std::string>();
            } else if (key == "swap_torus") {
                cfg.swap_torus = val.get<bool>();
            } else if (key == "radius") {
                cfg.radius = val.get<double>();
            } else if (key == "edge") {
                cfg.edge = val.get<double>();
            } else if (key == "torus_c") {
                cfg.torus_c = val.get<double>();
            } else if (key == "torus_a") {
                cfg.torus_a = val.get<double>();
            } else if (key == "rmin") {
                cfg.rmin = val.get<int>();
            } else if (key == "rmax") {
                cfg.rmax = val.get<int>();
            } else if (key == "dtype") {
                cfg.dtype = val.get<std::string>();
            } else if (key == "volume") {
                cfg.volume = val.get<std::string>();
            } else if (key == "threads") {
                cfg.threads = val.get<unsigned>();
            } else {
                throw std::invalid_argument("unknown config key: " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config value: " + std::string(e.what()));
    }
}

GridDims object_dims(const RunConfig& cfg, const std::string& name) {
    if (cfg.dims[0] > 0) return {cfg.dims[0], cfg.dims[1], cfg.dims[2]};
    int n = name == "torus" ? 160 : 64;  // printed torus radii need the room
    return {n, n, n};
}

Vec3 grid_center(GridDims d) {
    return {0.5 * (d.nx - 1), 0.5 * (d.ny - 1), 0.5 * (d.nz - 1)};
}

FieldSpec make_spec(const RunConfig& cfg, const std::string& name, GridDims dims) {
    Vec3 c = grid_center(dims);
    if (name == "sphere" || name == "noisedsph") return SphereSpec{c, cfg.radius};
    if (name == "cube") return CubeSpec{c, cfg.edge, cfg.edge, cfg.edge};
    if (name == "csph")
        return CubeMinusSphereSpec{CubeSpec{c, cfg.edge, cfg.edge, cfg.edge},
                                   SphereSpec{c, cfg.radius}};
    if (name == "torus") {
        double major = cfg.torus_c, minor = cfg.torus_a;
        if (cfg.swap_torus) std::swap(major, minor);
        return TorusSpec{c, major, minor};
    }
    if (name == "sombrero") return SombreroSpec{c, 12.0, 0.25, 3.0};
    throw std::invalid_argument("unknown object: " + name);
}

double noise_for(const RunConfig& cfg, const std::string& name) {
    if (cfg.noise_percent) return *cfg.noise_percent;
    return name == "noisedsph" ? 10.0 : 0.0;
}

// Noise amplitude is a percentage of this: the radius for spheres,
// half the largest extent otherwise.
double reference_length(const FieldSpec& spec) {
    if (const auto* s = std::get_if<SphereSpec>(&spec)) return s->radius;
    if (auto b = object_bounds(spec)) {
        Vec3 ext = b->second - b->first;
        return 0.5 * std::max({ext.x, ext.y, ext.z});
    }
    return std::get<SombreroSpec>(spec).a;
}

ScalarGrid build_volume(const RunConfig& cfg, const std::string& name, GridDims dims) {
    FieldSpec spec = make_spec(cfg, name, dims);
    ScalarGrid grid = generate_field(spec, dims, cfg.threads);
    double pct = noise_for(cfg, name);
    if (pct > 0.0) grid = add_noise(grid, NoiseSpec{pct, cfg.seed}, reference_length(spec));
    return grid;
}

uint64_t config_hash(const RunConfig& cfg, const std::string& command,
                     const std::vector<std::string>& objects) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["objects"] = objects;
    j["dims"] = cfg.dims;
    j["threshold"] = cfg.threshold;
    j["methods"] = cfg.methods;
    if (cfg.noise_percent)
        j["noise_percent"] = *cfg.noise_percent;
    else
        j["noise_percent"] = nullptr;
    j["seed"] = cfg.seed;
    j["density"] = cfg.density;
    j["paper_rms"] = cfg.paper_rms;
    j["format"] = cfg.format;
    j["swap_torus"] = cfg.swap_torus;
    j["radius"] = cfg.radius;
    j["edge"] = cfg.edge;
    j["torus_c"] = cfg.torus_c;
    j["torus_a"] = cfg.torus_a;
    j["rmin"] = cfg.rmin;
    j["rmax"] = cfg.rmax;
    j["dtype"] = cfg.dtype;
    return fnv1a64(j.dump());  // --out and --threads deliberately excluded
}

std::vector<std::string> effective_objects(const RunConfig& cfg, const char* command) {
    if (!cfg.objects.empty()) return cfg.objects;
    if (std::string(command) == "extract") return {"sphere"};
    return kDefaultObjects;
}

void export_mesh(const IndexedMesh& mesh, const fs::path& path, const std::string& fmt) {
    if (fmt == "obj")
        export_obj(mesh, path);
    else if (fmt == "ply")
        export_ply(mesh, path);
    else
        throw std::invalid_argument("unknown format: " + fmt + " (obj or ply)");
}

int cmd_gen(const RunConfig& cfg) {
    RawDType dtype;
    try {
        dtype = parse_dtype(cfg.dtype);
    } catch (const std::exception&) {
        throw std::invalid_argument("unknown dtype: " + cfg.dtype + " (u8, u16, f32, f64)");
    }
    fs::create_directories(cfg.out);
    for (const std::string& name : effective_objects(cfg, "gen")) {
        GridDims dims = object_dims(cfg, name);
        ScalarGrid grid = build_volume(cfg, name, dims);
        fs::path descriptor = fs::path(cfg.out) / (name + ".json");
        save_raw(grid, descriptor, dtype, RawEndian::Little);
        std::cout << "wrote " << descriptor.string() << " + " << name << ".raw (" << dims.nx
                  << "x" << dims.ny << "x" << dims.nz << " " << dtype_name(dtype) << ")\n";
    }
    return 0;
}

int cmd_extract(const RunConfig& cfg) {
    auto objects = effective_objects(cfg, "extract");
    if (!cfg.volume.empty() && objects.size() > 1)
        throw std::invalid_argument("--volume names one file; pass a single --object");
    fs::create_directories(cfg.out);
    for (const std::string& name : objects) {
        fs::path descriptor =
            cfg.volume.empty() ? fs::path(cfg.out) / (name + ".json") : fs::path(cfg.volume);
        std::string stem = cfg.volume.empty() ? name : descriptor.stem().string();
        ScalarGrid grid = load_raw(descriptor);
        for (const std::string& mname : cfg.methods) {
            ExtractionMethod method = parse_method(mname);
            ExtractResult res = extract(grid, cfg.threshold, method);
            if (res.mesh.triangles.empty()) {
                auto [lo, hi] = grid.value_range();
                if (cfg.threshold < lo || cfg.threshold > hi)
                    std::cerr << "warning: threshold " << cfg.threshold << " outside value range ["
                              << lo << ", " << hi << "]; " << stem << " " << mname
                              << " mesh is empty\n";
                else
                    std::cerr << "warning: empty mesh for " << stem << " " << mname << "\n";
            }
            fs::path out = fs::path(cfg.out) / (stem + "_" + mname + "." + cfg.format);
            export_mesh(res.mesh, out, cfg.format);
            MeshStats st = validate_topology(res.mesh);
            std::cout << stem << " " << mname << ": triangles=" << st.triangle_count
                      << " vertices=" << st.vertex_count
                      << " degenerate=" << st.degenerate_triangle_count
                      << " boundary=" << st.boundary_edge_count
                      << " nonmanifold=" << st.non_manifold_edge_count
                      << " chi=" << st.euler_characteristic << " -> " << out.string() << "\n";
        }
    }
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    auto objects = effective_objects(cfg, "compare");
    RmsVariant variant = cfg.paper_rms ? RmsVariant::SumOverN : RmsVariant::MeanSquare;
    SamplingSpec sampling;
    sampling.density = cfg.density;
    sampling.seed = cfg.seed;
    std::vector<MetricsReport> rows;

    for (const std::string& name : objects) {
        GridDims dims = object_dims(cfg, name);
        FieldSpec spec = make_spec(cfg, name, dims);
        ScalarGrid grid = build_volume(cfg, name, dims);

        std::map<std::string, ExtractResult> results;
        for (const std::string& mname : cfg.methods)
            results.emplace(mname, extract(grid, cfg.threshold, parse_method(mname)));
        const IndexedMesh* reference = nullptr;  // distances are measured against the mc mesh
        if (auto it = results.find("mc"); it != results.end() && !it->second.mesh.triangles.empty())
            reference = &it->second.mesh;

        for (const std::string& mname : cfg.methods) {
            const ExtractResult& res = results.at(mname);
            MeshStats st = validate_topology(res.mesh);
            MetricsReport row;
            row.object = name;
            row.method = mname;
            row.threshold = cfg.threshold;
            row.triangle_count = st.triangle_count;
            row.vertex_count = st.vertex_count;
            row.area = mesh_area(res.mesh);
            row.watertight = st.watertight();
            row.boundary_edge_count = st.boundary_edge_count;
            row.non_manifold_edge_count = st.non_manifold_edge_count;
            row.euler_characteristic = st.euler_characteristic;
            if (res.volume.enabled && row.watertight && !res.mesh.triangles.empty())
                row.volume = res.volume.volume;
            RelativeErrors rel = relative_errors(row.area, row.volume, spec);
            row.area_rel_error = rel.area;
            row.volume_rel_error = rel.volume;
            if (!res.mesh.triangles.empty()) row.p_err = p_err(res.mesh, spec);
            if (reference && reference != &res.mesh && !res.mesh.triangles.empty()) {
                row.hausdorff = hausdorff(res.mesh, *reference, sampling, cfg.threads);
                row.rms = cfg.paper_rms
                              ? rms_distance(res.mesh, *reference, sampling, variant, cfg.threads)
                              : row.hausdorff->rms_forward;
            }
            rows.push_back(std::move(row));
        }
        std::cout << "compared " << name << " (" << cfg.methods.size() << " methods)\n";
    }

    uint64_t hash = config_hash(cfg, "compare", objects);
    fs::create_directories(cfg.out);
    std::ofstream csv(fs::path(cfg.out) / "report.csv", std::ios::binary);
    write_report_csv(csv, rows, hash);
    std::ofstream js(fs::path(cfg.out) / "report.json", std::ios::binary);
    write_report_json(js, rows, hash);
    std::cout << "report: " << (fs::path(cfg.out) / "report.csv").string() << " + report.json ("
              << rows.size() << " rows)\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.rmin < 1 || cfg.rmax < cfg.rmin)
        throw std::invalid_argument("sweep wants 1 <= rmin <= rmax");
    GridDims dims =
        cfg.dims[0] > 0 ? GridDims{cfg.dims[0], cfg.dims[1], cfg.dims[2]} : GridDims{72, 72, 72};
    std::vector<SweepRow> rows;
    for (int r = cfg.rmin; r <= cfg.rmax; ++r) {
        FieldSpec spec = SphereSpec{grid_center(dims), double(r)};
        ScalarGrid grid = generate_field(spec, dims, cfg.threads);
        for (const std::string& mname : cfg.methods) {
            ExtractResult res = extract(grid, cfg.threshold, parse_method(mname));
            SweepRow row;
            row.radius = double(r);
            row.method = mname;
            row.triangle_count = res.mesh.triangles.size();
            row.vertex_count = res.mesh.vertices.size();
            row.area = mesh_area(res.mesh);
            if (res.volume.enabled) row.volume = res.volume.volume;
            row.volume_rel_error = relative_errors(std::nullopt, row.volume, spec).volume;
            rows.push_back(std::move(row));
        }
    }
    uint64_t hash = config_hash(cfg, "sweep", {});
    fs::create_directories(cfg.out);
    std::ofstream csv(fs::path(cfg.out) / "sweep.csv", std::ios::binary);
    write_sweep_csv(csv, rows, hash);
    std::cout << "sweep: " << (fs::path(cfg.out) / "sweep.csv").string() << " (" << rows.size()
              << " rows)\n";
    return 0;
}

int run(int argc, char** argv) {
    RunConfig cfg;

    // The config file seeds the defaults, so it must load before CLI11
    // binds them; flags then override.
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--config=", 0) == 0)
            load_config_file(arg.substr(9), cfg);
        else if (arg == "--config" && i + 1 < argc)
            load_config_file(argv[i + 1], cfg);
    }

    CLI::App app{"iso-surface extraction and measurement over regular scalar grids"};
    app.require_subcommand(1);
    app.footer("objects: sphere, noisedsph, cube, csph, torus, sombrero\n"
               "methods: mc, mt5, mt6, ccl");

    std::string config_path, object_list, method_list, dims_str;
    double noise_val = 0.0;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("-o,--object", object_list, "comma-separated object list");
    app.add_option("--dims", dims_str, "grid size: N or NXxNYxNZ");
    app.add_option("-m,--method", method_list, "comma-separated method list");
    app.add_option("-t,--threshold", cfg.threshold, "iso value")->capture_default_str();
    auto* noise_opt = app.add_option("--noise", noise_val, "noise amplitude, % of object size");
    app.add_option("--seed", cfg.seed, "noise / sampling seed")->capture_default_str();
    app.add_option("--out", cfg.out, "output directory")->capture_default_str();
    app.add_option("--density", cfg.density, "surface samples per unit area")
        ->capture_default_str();
    app.add_flag("--paper-rms", cfg.paper_rms, "report sqrt(sum x^2)/n instead of RMS");
    app.add_option("--threads", cfg.threads, "worker cap, 0 = hardware (never changes output)");
    app.add_option("--format", cfg.format, "mesh format: obj or ply")->capture_default_str();
    app.add_flag("--swap-torus", cfg.swap_torus, "swap torus main/secondary radii");
    app.add_option("--radius", cfg.radius, "sphere radius")->capture_default_str();
    app.add_option("--edge", cfg.edge, "cube edge length")->capture_default_str();
    app.add_option("--torus-c", cfg.torus_c, "torus main radius")->capture_default_str();
    app.add_option("--torus-a", cfg.torus_a, "torus secondary radius")->capture_default_str();
    app.add_option("--rmin", cfg.rmin, "sweep: first radius")->capture_default_str();
    app.add_option("--rmax", cfg.rmax, "sweep: last radius")->capture_default_str();
    app.add_option("--dtype", cfg.dtype, "gen: payload type u8|u16|f32|f64")
        ->capture_default_str();
    app.add_option("--volume", cfg.volume, "extract: explicit volume descriptor path");

    auto* gen = app.add_subcommand("gen", "generate volumes (raw payload + JSON descriptor)");
    auto* extract_cmd = app.add_subcommand("extract", "extract meshes from generated volumes");
    auto* compare = app.add_subcommand("compare", "object x method metrics report (CSV + JSON)");
    auto* sweep = app.add_subcommand("sweep", "sphere radius sweep (CSV)");
    for (auto* sub : {gen, extract_cmd, compare, sweep}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (noise_opt->count() > 0) cfg.noise_percent = noise_val;
    if (!object_list.empty()) cfg.objects = split_list(object_list);
    if (!method_list.empty()) cfg.methods = split_list(method_list);
    if (!dims_str.empty()) cfg.dims = parse_dims(dims_str);
    if (cfg.methods.empty()) throw std::invalid_argument("no methods selected");
    for (const std::string& m : cfg.methods) parse_method(m);  // reject typos up front

    if (app.got_subcommand(gen)) return cmd_gen(cfg);
    if (app.got_subcommand(extract_cmd)) return cmd_extract(cfg);
    if (app.got_subcommand(compare)) return cmd_compare(cfg);
    return cmd_sweep(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
