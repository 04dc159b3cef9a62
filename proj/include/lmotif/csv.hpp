#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lmotif::csv {

// Splits one RFC-4180 style record. Quoted fields may contain commas and
// doubled quotes; embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line);

// Quotes a field only when it needs it.
std::string field(std::string_view value);

// Shortest decimal form that parses back to the same double.
std::string number(double value);

}  // namespace lmotif::csv
