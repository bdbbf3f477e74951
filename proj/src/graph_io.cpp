#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "majdyn/graph.hpp"

namespace majdyn {
namespace {

constexpr std::array<char, 8> kMagic{'M', 'A', 'J', 'D', 'Y', 'N', 'G', '\0'};

template <typename T>
void put_le(std::string& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
    }
}

template <typename T>
T get_le(std::istream& in, const std::filesystem::path& path) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw std::runtime_error("load_graph: truncated file " + path.string());
    }
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return static_cast<T>(value);
}

}  // namespace

void save_graph(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_graph: cannot open " + path.string());
    }
    std::string buf(kMagic.data(), kMagic.size());
    buf.reserve(28 + 8 * g.offsets().size() + 4 * g.neighbor_array().size());
    put_le<std::uint32_t>(buf, kGraphFormatVersion);
    put_le<std::uint64_t>(buf, g.n());
    put_le<std::uint64_t>(buf, g.edge_count());
    for (std::uint64_t off : g.offsets()) {
        put_le<std::uint64_t>(buf, off);
    }
    for (Vertex v : g.neighbor_array()) {
        put_le<std::uint32_t>(buf, v);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) {
        throw std::runtime_error("save_graph: write failed for " + path.string());
    }
}

Graph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_graph: cannot open " + path.string());
    }
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw std::runtime_error("load_graph: bad magic in " + path.string());
    }
    const auto version = get_le<std::uint32_t>(in, path);
    if (version != kGraphFormatVersion) {
        throw std::runtime_error("load_graph: unsupported version " + std::to_string(version));
    }
    const auto n = get_le<std::uint64_t>(in, path);
    const auto m = get_le<std::uint64_t>(in, path);
    if (n > std::numeric_limits<Vertex>::max() || m > n * (n - 1) / 2 + (n == 0 ? 1 : 0)) {
        throw std::runtime_error("load_graph: implausible header in " + path.string());
    }
    std::vector<std::uint64_t> offsets(n + 1);
    for (auto& off : offsets) {
        off = get_le<std::uint64_t>(in, path);
    }
    std::vector<Vertex> neighbors(2 * m);
    for (auto& v : neighbors) {
        v = get_le<std::uint32_t>(in, path);
    }
    try {
        return Graph::from_csr(n, std::move(offsets), std::move(neighbors));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("load_graph: corrupt graph in " + path.string() + ": " + e.what());
    }
}

}  // namespace majdyn
