#include "topokit/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace topokit {

namespace {

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

static_assert(std::endian::native == std::endian::little,
              "raw grid I/O assumes a little-endian host");

}  // namespace

ScalarGrid read_grid_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    std::string header;
    if (!std::getline(in, header)) io_fail(path, "missing header line");

    GridDims dims;
    try {
        auto j = nlohmann::json::parse(header);
        auto d = j.at("dims");
        if (!d.is_array() || d.size() < 2 || d.size() > 3) io_fail(path, "bad dims");
        dims.w = d[0].get<int>();
        dims.h = d[1].get<int>();
        dims.d = d.size() == 3 ? d[2].get<int>() : 1;
        if (j.value("order", "row-major") != std::string("row-major"))
            io_fail(path, "unsupported value order");
    } catch (const nlohmann::json::exception& e) {
        io_fail(path, std::string("invalid JSON header: ") + e.what());
    }
    dims.validate();

    std::vector<float> raw(dims.size());
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size() * sizeof(float)));
    if (std::size_t(in.gcount()) != raw.size() * sizeof(float))
        io_fail(path, "truncated value payload");

    std::vector<double> values(raw.begin(), raw.end());
    return ScalarGrid(dims, std::move(values));
}

void write_grid_raw(const ScalarGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    nlohmann::json j;
    const GridDims& g = grid.dims();
    if (g.is3d())
        j["dims"] = {g.w, g.h, g.d};
    else
        j["dims"] = {g.w, g.h};
    j["order"] = "row-major";
    out << j.dump() << '\n';
    std::vector<float> raw(grid.values().begin(), grid.values().end());
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size() * sizeof(float)));
    if (!out) io_fail(path, "write failed");
}

BinaryMask read_mask_pgm(const std::string& path) {
    BinaryMask m = read_mask_pgm(path, 4);
    return m;
}

BinaryMask read_mask_pgm(const std::string& path, int fg_adjacency) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    std::string magic;
    in >> magic;
    if (magic != "P5") io_fail(path, "not a binary PGM (P5)");
    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        io_fail(path, "truncated PGM header");
    };
    int w = std::stoi(next_token());
    int h = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (maxval <= 0 || maxval > 255) io_fail(path, "unsupported PGM maxval");
    in.get();  // single whitespace after maxval
    std::vector<std::uint8_t> data(std::size_t(w) * h);
    in.read(reinterpret_cast<char*>(data.data()), std::streamsize(data.size()));
    if (std::size_t(in.gcount()) != data.size()) io_fail(path, "truncated PGM payload");
    for (auto& b : data) b = b != 0;
    GridDims dims{w, h, 1};
    return BinaryMask(dims, Adjacency{fg_adjacency}, std::move(data));
}

void write_mask_pgm(const BinaryMask& mask, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    const GridDims& g = mask.dims();
    out << "P5\n" << g.w << ' ' << g.h * g.d << "\n255\n";
    std::vector<std::uint8_t> data(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) data[i] = mask.at(i) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    if (!out) io_fail(path, "write failed");
}

}  // namespace topokit
