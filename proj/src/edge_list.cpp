#include "hamcount/edge_list.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hamcount/errors.hpp"

namespace hamcount {
namespace {

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

}  // namespace

Digraph read_edge_list(std::istream& in, bool one_indexed) {
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw FormatError("edge list line " + std::to_string(lineno) + ": " + what);
    };

    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!skippable(line)) {
            have_header = true;
            break;
        }
    }
    if (!have_header) throw FormatError("edge list is empty (missing 'n <n> loops <0|1>' header)");

    std::istringstream header(line);
    std::string kw_n;
    std::string kw_loops;
    long long n = -1;
    int loops = -1;
    std::string trailing;
    if (!(header >> kw_n >> n >> kw_loops >> loops) || kw_n != "n" || kw_loops != "loops" ||
        (header >> trailing)) {
        fail("expected header 'n <n> loops <0|1>'");
    }
    if (n < 1 || n > 0xffffffffLL) fail("vertex count must be positive");
    if (loops != 0 && loops != 1) fail("loops flag must be 0 or 1");

    Digraph d(static_cast<std::uint32_t>(n), loops == 1);
    const long long lo = one_indexed ? 1 : 0;
    const long long hi = one_indexed ? n : n - 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (skippable(line)) continue;
        std::istringstream row(line);
        long long u = 0;
        long long v = 0;
        if (!(row >> u >> v) || (row >> trailing)) fail("expected 'u v'");
        if (u < lo || u > hi || v < lo || v > hi) {
            fail("vertex id out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        if (u == v && loops == 0) fail("loop in a 'loops 0' graph");
        const auto a = static_cast<Vertex>(u - lo);
        const auto b = static_cast<Vertex>(v - lo);
        if (!d.add_edge(a, b)) fail("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    return d;
}

void write_edge_list(std::ostream& out, const Digraph& d, bool one_indexed) {
    const Vertex shift = one_indexed ? 1 : 0;
    out << "n " << d.n() << " loops " << (d.allow_loops() ? 1 : 0) << '\n';
    for (const Edge& e : d.edges()) out << e.from + shift << ' ' << e.to + shift << '\n';
}

Digraph read_edge_list_file(const std::string& path, bool one_indexed) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open edge list '" + path + "'");
    return read_edge_list(in, one_indexed);
}

}  // namespace hamcount
