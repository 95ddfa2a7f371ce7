#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace predacgan::csv {

// Splits one CSV line on commas and trims surrounding whitespace from each
// field. Quoted fields are not supported; none of the schemas need them.
std::vector<std::string> split_line(std::string_view line);

// Shortest text that parses back to the identical double.
std::string format_real(double value);

// Opens `path` for writing, creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

// Reads all lines of a text file; strips a UTF-8 BOM and trailing '\r'.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace predacgan::csv
