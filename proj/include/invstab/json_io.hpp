#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace invstab {

using Json = nlohmann::ordered_json;

// Pretty-printed JSON with every floating-point number written using 17
// significant digits, so values round-trip exactly.
std::string DumpJson17(const Json& j, int indent = 2);

// "%.17g"
std::string FormatDouble17(double v);

// Writes through a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& content);

}  // namespace invstab
