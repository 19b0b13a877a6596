#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace mrw {

// "%.17g" rendering used for every number the tools emit.
std::string format_number(double v);

// Pretty-printed JSON with floating-point numbers at 17 significant digits,
// keys in insertion order, trailing newline.
std::string dump_json(const nlohmann::ordered_json& doc);

// Writes header plus rows; each row's cells are already formatted.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mrw
