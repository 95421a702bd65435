#include "anisodiff/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "GFB1 I/O assumes a little-endian host");

namespace anisodiff {

void write_gfb(const std::string& path, const GridSpec& spec,
               const std::vector<double>& field) {
    if (static_cast<std::int64_t>(field.size()) != spec.total)
        throw std::invalid_argument("write_gfb: field size does not match grid");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_gfb: cannot open " + path);
    f.write("GFB1", 4);
    const std::uint32_t dim = static_cast<std::uint32_t>(spec.dim);
    f.write(reinterpret_cast<const char*>(&dim), 4);
    for (int i = 0; i < spec.dim; ++i) {
        const std::uint64_t n = static_cast<std::uint64_t>(spec.cells[i]);
        f.write(reinterpret_cast<const char*>(&n), 8);
        f.write(reinterpret_cast<const char*>(&spec.half_length[i]), 8);
    }
    f.write(reinterpret_cast<const char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!f) throw std::runtime_error("write_gfb: short write to " + path);
}

std::pair<GridSpec, std::vector<double>> read_gfb(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_gfb: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "GFB1", 4) != 0)
        throw std::runtime_error("read_gfb: bad magic in " + path);
    std::uint32_t dim = 0;
    f.read(reinterpret_cast<char*>(&dim), 4);
    if (!f || dim < 1 || dim > 16) throw std::runtime_error("read_gfb: bad dim in " + path);
    std::vector<std::int64_t> cells(dim);
    std::vector<double> half(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
        std::uint64_t n = 0;
        f.read(reinterpret_cast<char*>(&n), 8);
        f.read(reinterpret_cast<char*>(&half[i]), 8);
        cells[i] = static_cast<std::int64_t>(n);
    }
    if (!f) throw std::runtime_error("read_gfb: truncated header in " + path);
    GridSpec spec = make_grid(static_cast<int>(dim), half, cells);
    std::vector<double> field(static_cast<size_t>(spec.total));
    f.read(reinterpret_cast<char*>(field.data()),
           static_cast<std::streamsize>(field.size() * sizeof(double)));
    if (!f) throw std::runtime_error("read_gfb: truncated payload in " + path);
    return {std::move(spec), std::move(field)};
}

} // namespace anisodiff
