#include "omics/vol_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "omics/error.hpp"
#include "omics/io_util.hpp"

namespace omics {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Header {
    Grid grid;
    std::string dtype;
    fs::path data;
};

Header read_header(const fs::path& header) {
    json j;
    try {
        j = json::parse(read_text_file(header));
        Header h;
        for (int a = 0; a < 3; ++a) {
            h.grid.dims[a] = j.at("dims").at(a).get<std::size_t>();
            h.grid.spacing[a] = j.at("spacing").at(a).get<double>();
            h.grid.origin[a] = j.at("origin").at(a).get<double>();
        }
        h.dtype = j.at("dtype").get<std::string>();
        h.data = header.parent_path() / j.at("data").get<std::string>();
        h.grid.validate();
        return h;
    } catch (const json::exception& e) {
        throw IoError("malformed VOL1 header " + header.string() + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw IoError("invalid VOL1 geometry in " + header.string() + ": " + e.what());
    }
}

std::vector<char> read_payload(const Header& h, std::size_t elem_size) {
    std::ifstream in(h.data, std::ios::binary);
    if (!in) throw IoError("cannot open VOL1 payload: " + h.data.string());
    std::vector<char> buf(h.grid.size() * elem_size);
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()) || in.peek() != std::char_traits<char>::eof())
        throw IoError("VOL1 payload " + h.data.string() + " does not hold exactly " + std::to_string(h.grid.size()) +
                      " elements");
    return buf;
}

std::uint32_t to_little(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big)
        return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    return v;
}

void write_header(const fs::path& header, const Grid& g, const char* dtype, const fs::path& payload) {
    json j;
    j["dims"] = {g.dims[0], g.dims[1], g.dims[2]};
    j["spacing"] = {g.spacing[0], g.spacing[1], g.spacing[2]};
    j["origin"] = {g.origin[0], g.origin[1], g.origin[2]};
    j["dtype"] = dtype;
    j["data"] = payload.filename().string();
    write_file_atomic(header, j.dump() + "\n");
}

fs::path payload_path(const fs::path& header) {
    auto p = header;
    p.replace_extension(".raw");
    return p;
}

}  // namespace

Volume3D read_volume(const fs::path& header) {
    const Header h = read_header(header);
    if (h.dtype == "u8") return read_mask(header).to_volume();
    if (h.dtype != "f32") throw IoError("unsupported VOL1 dtype '" + h.dtype + "' in " + header.string());
    const auto buf = read_payload(h, 4);
    std::vector<double> vals(h.grid.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, buf.data() + 4 * i, 4);
        vals[i] = static_cast<double>(std::bit_cast<float>(to_little(bits)));
    }
    try {
        return Volume3D(h.grid, std::move(vals));
    } catch (const InvalidArgument& e) {
        throw IoError(header.string() + ": " + e.what());
    }
}

Mask3D read_mask(const fs::path& header) {
    const Header h = read_header(header);
    if (h.dtype != "u8") throw IoError("mask " + header.string() + " must have dtype u8");
    const auto buf = read_payload(h, 1);
    std::vector<std::uint8_t> occ(buf.begin(), buf.end());
    try {
        return Mask3D(h.grid, std::move(occ));
    } catch (const InvalidArgument& e) {
        throw IoError(header.string() + ": " + e.what());
    }
}

void write_volume(const fs::path& header, const Volume3D& v) {
    const auto payload = payload_path(header);
    std::string bytes(v.size() * 4, '\0');
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::uint32_t bits = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(v[i])));
        std::memcpy(bytes.data() + 4 * i, &bits, 4);
    }
    write_file_atomic(payload, bytes);
    write_header(header, v.grid(), "f32", payload);
}

void write_mask(const fs::path& header, const Mask3D& m) {
    const auto payload = payload_path(header);
    const auto occ = m.occupancy();
    write_file_atomic(payload, std::string(occ.begin(), occ.end()));
    write_header(header, m.grid(), "u8", payload);
}

}  // namespace omics
