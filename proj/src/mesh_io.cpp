#include "isomesh/mesh_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace isomesh {

namespace {

std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

// Accepts "i", "i/t", "i//n", "i/t/n"; only the vertex index matters here.
int parse_obj_index(const std::string& token, std::size_t vertex_count,
                    const std::filesystem::path& path) {
    int idx = 0;
    auto slash = token.find('/');
    const char* end = token.data() + (slash == std::string::npos ? token.size() : slash);
    auto [p, ec] = std::from_chars(token.data(), end, idx);
    if (ec != std::errc() || p != end) fail(path, "bad face index \"" + token + "\"");
    if (idx < 0) idx = int(vertex_count) + idx + 1;  // OBJ negative = relative
    if (idx < 1 || std::size_t(idx) > vertex_count)
        fail(path, "face index " + token + " out of range");
    return idx - 1;
}

}  // namespace

void export_obj(const IndexedMesh& mesh, const std::filesystem::path& path) {
    validate_mesh(mesh);
    std::ostringstream out;
    for (const auto& v : mesh.vertices)
        out << "v " << fmt_g17(v.x) << ' ' << fmt_g17(v.y) << ' ' << fmt_g17(v.z) << '\n';
    for (const auto& n : mesh.normals)
        out << "vn " << fmt_g17(n.x) << ' ' << fmt_g17(n.y) << ' ' << fmt_g17(n.z) << '\n';
    for (const auto& t : mesh.triangles) {
        out << 'f';
        if (mesh.normals.empty())
            for (int idx : t) out << ' ' << idx + 1;
        else
            for (int idx : t) out << ' ' << idx + 1 << "//" << idx + 1;
        out << '\n';
    }
    std::ofstream file(path, std::ios::binary);  // binary: no newline translation
    if (!file) fail(path, "cannot open for writing");
    file << out.str();
    if (!file) fail(path, "write failed");
}

IndexedMesh import_obj(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) fail(path, "cannot open");
    IndexedMesh mesh;
    std::string line;
    while (std::getline(file, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v" || tag == "vn") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z)) fail(path, "bad " + tag + " line: " + line);
            (tag == "v" ? mesh.vertices : mesh.normals).push_back(p);
        } else if (tag == "f") {
            std::array<std::string, 3> tok;
            if (!(ls >> tok[0] >> tok[1] >> tok[2])) fail(path, "bad face line: " + line);
            std::string extra;
            if (ls >> extra) fail(path, "only triangle faces are supported: " + line);
            mesh.triangles.push_back({parse_obj_index(tok[0], mesh.vertices.size(), path),
                                      parse_obj_index(tok[1], mesh.vertices.size(), path),
                                      parse_obj_index(tok[2], mesh.vertices.size(), path)});
        }
        // anything else (o, g, s, usemtl, ...) is ignorable structure
    }
    // a file with no vn lines stays normal-less, keeping round trips byte-stable
    if (!mesh.normals.empty() && mesh.normals.size() != mesh.vertices.size())
        fail(path, "normal count does not match vertex count");
    validate_mesh(mesh);
    return mesh;
}

void export_ply(const IndexedMesh& mesh, const std::filesystem::path& path) {
    validate_mesh(mesh);
    static_assert(std::endian::native == std::endian::little,
                  "binary PLY writer assumes a little-endian host");
    std::ofstream file(path, std::ios::binary);
    if (!file) fail(path, "cannot open for writing");
    file << "ply\nformat binary_little_endian 1.0\n"
         << "element vertex " << mesh.vertices.size() << '\n'
         << "property float x\nproperty float y\nproperty float z\n"
         << "property float nx\nproperty float ny\nproperty float nz\n"
         << "element face " << mesh.triangles.size() << '\n'
         << "property list uchar int vertex_indices\nend_header\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        Vec3 n = mesh.normals.empty() ? Vec3{} : mesh.normals[i];
        float rec[6] = {float(mesh.vertices[i].x), float(mesh.vertices[i].y),
                        float(mesh.vertices[i].z), float(n.x), float(n.y), float(n.z)};
        file.write(reinterpret_cast<const char*>(rec), sizeof rec);
    }
    for (const auto& t : mesh.triangles) {
        uint8_t count = 3;
        int32_t idx[3] = {t[0], t[1], t[2]};
        file.write(reinterpret_cast<const char*>(&count), 1);
        file.write(reinterpret_cast<const char*>(idx), sizeof idx);
    }
    if (!file) fail(path, "write failed");
}

IndexedMesh import_ply(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) fail(path, "cannot open");
    std::string line;
    std::size_t vertex_count = 0, face_count = 0;
    bool saw_format = false;
    std::vector<std::string> vertex_props;
    if (!std::getline(file, line) || line != "ply") fail(path, "not a PLY file");
    std::string current_element;
    while (std::getline(file, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment") continue;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "binary_little_endian") fail(path, "unsupported PLY format " + fmt);
            saw_format = true;
        } else if (tag == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            current_element = name;
            if (name == "vertex") vertex_count = count;
            else if (name == "face") face_count = count;
            else fail(path, "unsupported PLY element " + name);
        } else if (tag == "property") {
            if (current_element == "vertex") {
                std::string type, name;
                ls >> type >> name;
                if (type != "float") fail(path, "unsupported vertex property type " + type);
                vertex_props.push_back(name);
            }  // face list property checked implicitly by the read below
        } else if (tag == "end_header") {
            break;
        } else {
            fail(path, "unexpected header line: " + line);
        }
    }
    if (!saw_format) fail(path, "missing format line");
    const std::vector<std::string> expected = {"x", "y", "z", "nx", "ny", "nz"};
    if (vertex_props != expected) fail(path, "expected vertex properties x y z nx ny nz");

    IndexedMesh mesh;
    mesh.vertices.resize(vertex_count);
    mesh.normals.resize(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i) {
        float rec[6];
        file.read(reinterpret_cast<char*>(rec), sizeof rec);
        mesh.vertices[i] = {rec[0], rec[1], rec[2]};
        mesh.normals[i] = {rec[3], rec[4], rec[5]};
    }
    mesh.triangles.reserve(face_count);
    for (std::size_t f = 0; f < face_count; ++f) {
        uint8_t count = 0;
        file.read(reinterpret_cast<char*>(&count), 1);
        if (file && count != 3) fail(path, "only triangle faces are supported");
        int32_t idx[3];
        file.read(reinterpret_cast<char*>(idx), sizeof idx);
        mesh.triangles.push_back({idx[0], idx[1], idx[2]});
    }
    if (!file) fail(path, "truncated payload");
    validate_mesh(mesh);
    return mesh;
}

}  // namespace isomesh
