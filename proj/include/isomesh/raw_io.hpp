#pragma once

#include <filesystem>
#include <string>

#include "isomesh/grid.hpp"

namespace isomesh {

// Scalar type of a raw payload. u8/u16 exist to ingest typical scanner data;
// f64 round-trips the internal representation bit for bit.
enum class RawDType { U8, U16, F32, F64 };
enum class RawEndian { Little, Big };

RawDType parse_dtype(const std::string& name);    // throws std::runtime_error
RawEndian parse_endian(const std::string& name);  // throws std::runtime_error
const char* dtype_name(RawDType t);
const char* endian_name(RawEndian e);
std::size_t dtype_size(RawDType t);

/// A volume on disk is a JSON descriptor {nx, ny, nz, dtype, endian} plus a
/// headerless payload of nx*ny*nz scalars in x-fastest order, stored next to
/// the descriptor as <descriptor stem>.raw.
///
/// load_raw widens payload scalars to double. Errors (missing/garbled
/// descriptor, unknown dtype or endian, payload length mismatch) throw
/// std::runtime_error with distinct messages.
ScalarGrid load_raw(const std::filesystem::path& descriptor_path);

/// Writes payload plus descriptor. Integer dtypes round and clamp to the
/// target range, f32 narrows; only f64 (the default) is lossless for
/// arbitrary sample values.
void save_raw(const ScalarGrid& grid, const std::filesystem::path& descriptor_path,
              RawDType dtype = RawDType::F64, RawEndian endian = RawEndian::Little);

}  // namespace isomesh
