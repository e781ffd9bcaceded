#pragma once

#include <filesystem>

#include "isomesh/mesh.hpp"

namespace isomesh {

/// ASCII OBJ: v/vn lines in full round-trip precision (17 significant
/// digits), then 1-based `f a//a b//b c//c` faces (plain `f a b c` when the
/// mesh has no normals; a file with no vn lines imports normal-less).
/// Export-import-export is byte-stable. I/O failures throw
/// std::runtime_error.
void export_obj(const IndexedMesh& mesh, const std::filesystem::path& path);
IndexedMesh import_obj(const std::filesystem::path& path);

/// binary_little_endian 1.0 PLY: float x y z nx ny nz per vertex, then
/// uchar-counted int vertex_indices per face. Positions narrow to float32 on
/// export; export-import-export is byte-stable.
void export_ply(const IndexedMesh& mesh, const std::filesystem::path& path);
IndexedMesh import_ply(const std::filesystem::path& path);

}  // namespace isomesh
