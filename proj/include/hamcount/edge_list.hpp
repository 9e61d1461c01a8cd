#pragma once

#include <iosfwd>
#include <string>

#include "hamcount/digraph.hpp"

namespace hamcount {

/// Text format:
///
///     n <n> loops <0|1>
///     u v
///     ...
///
/// Blank lines and lines starting with '#' are skipped. Duplicate edges,
/// out-of-range ids and loops in a `loops 0` graph are rejected with
/// FormatError. With `one_indexed`, ids are read and written as 1..n.
Digraph read_edge_list(std::istream& in, bool one_indexed = false);
void write_edge_list(std::ostream& out, const Digraph& d, bool one_indexed = false);

Digraph read_edge_list_file(const std::string& path, bool one_indexed = false);

}  // namespace hamcount
