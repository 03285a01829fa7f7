#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kamsim {

// Formats a double with 12 significant digits ("%.12g"); the fixed width
// keeps output files byte-stable across reruns.
std::string format_double(double v);

// Quotes a field per RFC 4180 when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

std::string csv_join(const std::vector<std::string>& fields);

// Reads one CSV record, honoring quoted fields (including embedded commas,
// doubled quotes and newlines).  Returns nullopt at end of input.
std::optional<std::vector<std::string>> csv_read_record(std::istream& in);

}  // namespace kamsim
