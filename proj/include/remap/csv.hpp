#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace remap::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
/// newlines. Throws std::runtime_error on an unterminated quote.
std::vector<Row> parse(std::string_view text);

std::string escape(std::string_view field);
std::string format_row(const Row& row);

}  // namespace remap::csv
