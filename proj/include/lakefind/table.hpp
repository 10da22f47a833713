#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lakefind {

enum class ColumnKind { Text, Numeric };

inline const char* kind_name(ColumnKind k) {
    return k == ColumnKind::Text ? "text" : "numeric";
}

/// One column of a dataset. The extent excludes nulls: `values` holds the
/// trimmed raw cells, and for Numeric columns `numbers` holds the parsed
/// value of each cell in `values` (same order, same length). Cells that are
/// null markers — and, for Numeric columns, cells that fail to parse — are
/// counted in `null_count`, so values.size() + null_count == row_count.
struct Attribute {
    std::string name;
    std::size_t position = 0;
    ColumnKind kind = ColumnKind::Text;
    std::vector<std::string> values;
    std::vector<double> numbers;
    std::size_t null_count = 0;
};

/// A named table loaded from the lake. `id` is the file path relative to the
/// lake root and is the stable identifier used in indexes and query output.
struct Dataset {
    std::string id;
    std::string name;
    std::vector<Attribute> attributes;
    std::size_t row_count = 0;
};

}  // namespace lakefind
