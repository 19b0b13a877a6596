#include "mrw/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mrw/error.hpp"

namespace mrw {

namespace {

void emit(const nlohmann::ordered_json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + nlohmann::ordered_json(key).dump() + ": ";
                emit(value, out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ", ";
                first = false;
                emit(value, out, indent + 1);
            }
            out += "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += std::isfinite(j.get<double>()) ? format_number(j.get<double>()) : "null";
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const nlohmann::ordered_json& doc) {
    std::string out;
    emit(doc, out, 0);
    out += "\n";
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::string text;
    for (std::size_t c = 0; c < header.size(); ++c) text += (c ? "," : "") + header[c];
    text += "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + row[c];
        text += "\n";
    }
    write_text(path, text);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

}  // namespace mrw
