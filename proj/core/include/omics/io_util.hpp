#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace omics {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Parse a full string as a double; throws DataError on junk.
double parse_double(std::string_view text);

/// Write via a sibling temporary file and rename into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace omics
