#include "isomesh/raw_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

namespace isomesh {

namespace {

template <class T>
T byteswap(T v) {
    auto bytes = std::bit_cast<std::array<std::byte, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

bool swap_needed(RawEndian e) {
    return (e == RawEndian::Little) != (std::endian::native == std::endian::little);
}

std::filesystem::path payload_path(const std::filesystem::path& descriptor) {
    auto p = descriptor;
    p.replace_extension(".raw");
    return p;
}

template <class T>
std::vector<double> read_payload(std::ifstream& in, std::size_t count, bool swap) {
    std::vector<T> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(count * sizeof(T)));
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        T v = swap ? byteswap(buf[i]) : buf[i];
        out[i] = double(v);
    }
    return out;
}

template <class T>
void write_payload(std::ofstream& out, const std::vector<double>& samples, bool swap) {
    std::vector<T> buf(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        T v;
        if constexpr (std::is_integral_v<T>) {
            double lo = double(std::numeric_limits<T>::min());
            double hi = double(std::numeric_limits<T>::max());
            v = T(std::llround(std::clamp(samples[i], lo, hi)));
        } else {
            v = T(samples[i]);
        }
        buf[i] = swap ? byteswap(v) : v;
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              std::streamsize(buf.size() * sizeof(T)));
}

}  // namespace

RawDType parse_dtype(const std::string& name) {
    if (name == "u8") return RawDType::U8;
    if (name == "u16") return RawDType::U16;
    if (name == "f32") return RawDType::F32;
    if (name == "f64") return RawDType::F64;
    throw std::runtime_error("raw volume: unknown dtype \"" + name +
                             "\" (expected u8, u16, f32 or f64)");
}

RawEndian parse_endian(const std::string& name) {
    if (name == "le") return RawEndian::Little;
    if (name == "be") return RawEndian::Big;
    throw std::runtime_error("raw volume: unknown endian \"" + name + "\" (expected le or be)");
}

const char* dtype_name(RawDType t) {
    switch (t) {
        case RawDType::U8: return "u8";
        case RawDType::U16: return "u16";
        case RawDType::F32: return "f32";
        default: return "f64";
    }
}

const char* endian_name(RawEndian e) { return e == RawEndian::Little ? "le" : "be"; }

std::size_t dtype_size(RawDType t) {
    switch (t) {
        case RawDType::U8: return 1;
        case RawDType::U16: return 2;
        case RawDType::F32: return 4;
        default: return 8;
    }
}

ScalarGrid load_raw(const std::filesystem::path& descriptor_path) {
    std::ifstream desc_in(descriptor_path);
    if (!desc_in)
        throw std::runtime_error("raw volume: cannot read descriptor " +
                                 descriptor_path.string());
    nlohmann::json desc;
    try {
        desc_in >> desc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("raw volume: malformed descriptor " + descriptor_path.string() +
                                 ": " + e.what());
    }
    for (auto& [key, _] : desc.items()) {
        if (key != "nx" && key != "ny" && key != "nz" && key != "dtype" && key != "endian")
            throw std::runtime_error("raw volume: unknown descriptor key \"" + key + "\"");
    }
    for (const char* key : {"nx", "ny", "nz", "dtype", "endian"}) {
        if (!desc.contains(key))
            throw std::runtime_error(std::string("raw volume: descriptor missing \"") + key +
                                     "\"");
    }
    GridDims dims{desc.at("nx").get<int>(), desc.at("ny").get<int>(), desc.at("nz").get<int>()};
    if (!dims.valid())
        throw std::runtime_error("raw volume: dims must be at least 2 samples per axis");
    RawDType dtype = parse_dtype(desc.at("dtype").get<std::string>());
    RawEndian endian = parse_endian(desc.at("endian").get<std::string>());

    auto data_path = payload_path(descriptor_path);
    std::ifstream in(data_path, std::ios::binary | std::ios::ate);
    if (!in)
        throw std::runtime_error("raw volume: cannot read payload " + data_path.string());
    std::size_t actual = std::size_t(in.tellg());
    std::size_t expected = dims.sample_count() * dtype_size(dtype);
    if (actual != expected)
        throw std::runtime_error("raw volume: payload " + data_path.string() + " holds " +
                                 std::to_string(actual) + " bytes, descriptor implies " +
                                 std::to_string(expected));
    in.seekg(0);
    bool swap = swap_needed(endian);
    std::vector<double> samples;
    switch (dtype) {
        case RawDType::U8: samples = read_payload<uint8_t>(in, dims.sample_count(), false); break;
        case RawDType::U16: samples = read_payload<uint16_t>(in, dims.sample_count(), swap); break;
        case RawDType::F32: samples = read_payload<float>(in, dims.sample_count(), swap); break;
        case RawDType::F64: samples = read_payload<double>(in, dims.sample_count(), swap); break;
    }
    if (!in)
        throw std::runtime_error("raw volume: short read on " + data_path.string());
    return ScalarGrid(dims, std::move(samples));
}

void save_raw(const ScalarGrid& grid, const std::filesystem::path& descriptor_path,
              RawDType dtype, RawEndian endian) {
    auto data_path = payload_path(descriptor_path);
    {
        std::ofstream out(data_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("raw volume: cannot write payload " + data_path.string());
        bool swap = swap_needed(endian);
        switch (dtype) {
            case RawDType::U8: write_payload<uint8_t>(out, grid.samples(), false); break;
            case RawDType::U16: write_payload<uint16_t>(out, grid.samples(), swap); break;
            case RawDType::F32: write_payload<float>(out, grid.samples(), swap); break;
            case RawDType::F64: write_payload<double>(out, grid.samples(), swap); break;
        }
        if (!out)
            throw std::runtime_error("raw volume: write failed on " + data_path.string());
    }
    nlohmann::json desc{{"nx", grid.dims().nx},
                        {"ny", grid.dims().ny},
                        {"nz", grid.dims().nz},
                        {"dtype", dtype_name(dtype)},
                        {"endian", endian_name(endian)}};
    std::ofstream out(descriptor_path);
    if (!out)
        throw std::runtime_error("raw volume: cannot write descriptor " +
                                 descriptor_path.string());
    out << desc.dump(2) << "\n";
    if (!out)
        throw std::runtime_error("raw volume: write failed on " + descriptor_path.string());
}

}  // namespace isomesh
