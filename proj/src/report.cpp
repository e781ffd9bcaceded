#include "isomesh/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace isomesh {

namespace {

constexpr const char* kNa = "na";

std::string opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string(kNa);
}

std::string hash_tag(uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::ordered_json row_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            j[key] = *v;
        else
            j[key] = nullptr;
    };
    j["object"] = r.object;
    j["method"] = r.method;
    j["threshold"] = r.threshold;
    j["triangles"] = r.triangle_count;
    j["vertices"] = r.vertex_count;
    j["area"] = r.area;
    put("area_rel_err", r.area_rel_error);
    put("volume", r.volume);
    put("volume_rel_err", r.volume_rel_error);
    put("p_err", r.p_err);
    if (r.hausdorff) {
        j["hausdorff_forward"] = r.hausdorff->forward;
        j["hausdorff_backward"] = r.hausdorff->backward;
        j["hausdorff_symmetric"] = r.hausdorff->symmetric;
    } else {
        j["hausdorff_forward"] = nullptr;
        j["hausdorff_backward"] = nullptr;
        j["hausdorff_symmetric"] = nullptr;
    }
    put("rms", r.rms);
    j["watertight"] = r.watertight;
    j["boundary_edges"] = r.boundary_edge_count;
    j["nonmanifold_edges"] = r.non_manifold_edge_count;
    j["euler"] = r.euler_characteristic;
    return j;
}

}  // namespace

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

void write_report_csv(std::ostream& os, const std::vector<MetricsReport>& rows,
                      uint64_t config_hash) {
    os << "# isomesh-report v1 config=" << hash_tag(config_hash) << "\n";
    os << "object,method,threshold,triangles,vertices,area,area_rel_err,volume,volume_rel_err,"
          "p_err,hausdorff_forward,hausdorff_backward,hausdorff_symmetric,rms,watertight,"
          "boundary_edges,nonmanifold_edges,euler\n";
    for (const auto& r : rows) {
        os << r.object << ',' << r.method << ',' << format_double(r.threshold) << ','
           << r.triangle_count << ',' << r.vertex_count << ',' << format_double(r.area) << ','
           << opt(r.area_rel_error) << ',' << opt(r.volume) << ',' << opt(r.volume_rel_error)
           << ',' << opt(r.p_err) << ',';
        if (r.hausdorff)
            os << format_double(r.hausdorff->forward) << ','
               << format_double(r.hausdorff->backward) << ','
               << format_double(r.hausdorff->symmetric) << ',';
        else
            os << kNa << ',' << kNa << ',' << kNa << ',';
        os << opt(r.rms) << ',' << (r.watertight ? 1 : 0) << ',' << r.boundary_edge_count << ','
           << r.non_manifold_edge_count << ',' << r.euler_characteristic << '\n';
    }
}

void write_report_json(std::ostream& os, const std::vector<MetricsReport>& rows,
                       uint64_t config_hash) {
    nlohmann::ordered_json j;
    j["schema"] = "isomesh-report";
    j["version"] = 1;
    j["config"] = hash_tag(config_hash);
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    os << j.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, uint64_t config_hash) {
    os << "# isomesh-sweep v1 config=" << hash_tag(config_hash) << "\n";
    os << "radius,method,triangles,vertices,area,volume,volume_rel_err\n";
    for (const auto& r : rows) {
        os << format_double(r.radius) << ',' << r.method << ',' << r.triangle_count << ','
           << r.vertex_count << ',' << format_double(r.area) << ',' << opt(r.volume) << ','
           << opt(r.volume_rel_error) << '\n';
    }
}

}  // namespace isomesh
