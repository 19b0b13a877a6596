#include "mrw/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mrw/error.hpp"
#include "mrw/report_io.hpp"

namespace mrw {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw InputError(where + ": field '" + key + "' must be a number");
    }
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw InputError(where + ": field '" + key + "' is not finite");
    return v;
}

StepKernel parse_kernel(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw InputError(where + ": kernel must be an object with a string 'type'");
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "point") return PointKernel{number(j, "v", where)};
    if (type == "gaussian") return GaussianKernel{number(j, "mean", where), number(j, "std", where)};
    if (type == "lattice") {
        LatticeKernel l{number(j, "h", where), j.contains("c") ? number(j, "c", where) : 0.0, {}};
        if (!j.contains("pmf") || !j.at("pmf").is_object()) throw InputError(where + ": lattice needs a 'pmf' object");
        for (const auto& [key, value] : j.at("pmf").items()) {
            std::int64_t index = 0;
            std::size_t used = 0;
            try {
                index = std::stoll(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != key.size() || key.empty()) throw InputError(where + ": pmf key '" + key + "' is not an integer");
            if (!value.is_number() || !std::isfinite(value.get<double>())) {
                throw InputError(where + ": pmf mass for '" + key + "' must be a finite number");
            }
            l.pmf.emplace_back(index, value.get<double>());
        }
        std::sort(l.pmf.begin(), l.pmf.end());
        return l;
    }
    throw InputError(where + ": unknown kernel type '" + type + "'");
}

}  // namespace

MrwModel parse_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("model JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("model file must hold a JSON object");
    for (const char* key : {"states", "P", "kernels"}) {
        if (!doc.contains(key)) throw InputError(std::string("model file lacks '") + key + "'");
    }
    const auto& states = doc.at("states");
    if (!states.is_array() || states.empty()) throw InputError("'states' must be a non-empty array");
    std::vector<std::string> labels;
    for (const auto& s : states) {
        if (!s.is_string()) throw InputError("state labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    const std::size_t n = labels.size();
    const auto& P = doc.at("P");
    const auto& K = doc.at("kernels");
    if (!P.is_array() || P.size() != n) throw InputError("'P' must have one row per state");
    if (!K.is_array() || K.size() != n) throw InputError("'kernels' must have one row per state");
    std::vector<double> p;
    std::vector<std::optional<StepKernel>> kernels;
    for (std::size_t i = 0; i < n; ++i) {
        if (!P[i].is_array() || P[i].size() != n) throw InputError("row " + std::to_string(i) + " of 'P' has wrong length");
        if (!K[i].is_array() || K[i].size() != n) {
            throw InputError("row " + std::to_string(i) + " of 'kernels' has wrong length");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!P[i][j].is_number() || !std::isfinite(P[i][j].get<double>())) {
                throw InputError("P[" + std::to_string(i) + "][" + std::to_string(j) + "] must be a finite number");
            }
            p.push_back(P[i][j].get<double>());
            if (K[i][j].is_null()) {
                kernels.emplace_back();
            } else {
                kernels.emplace_back(parse_kernel(K[i][j], "kernels[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
            }
        }
    }
    return MrwModel(std::move(labels), std::move(p), std::move(kernels));
}

MrwModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string model_to_json(const MrwModel& m) {
    nlohmann::ordered_json doc;
    doc["states"] = m.labels();
    const std::size_t n = m.size();
    auto P = nlohmann::ordered_json::array();
    auto K = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        auto prow = nlohmann::ordered_json::array();
        auto krow = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < n; ++j) {
            prow.push_back(m.p(i, j));
            const auto& k = m.kernel(i, j);
            if (!k) {
                krow.push_back(nullptr);
            } else if (const auto* pk = std::get_if<PointKernel>(&*k)) {
                krow.push_back({{"type", "point"}, {"v", pk->value}});
            } else if (const auto* g = std::get_if<GaussianKernel>(&*k)) {
                krow.push_back({{"type", "gaussian"}, {"mean", g->mean}, {"std", g->stddev}});
            } else {
                const auto& l = std::get<LatticeKernel>(*k);
                nlohmann::ordered_json pmf = nlohmann::ordered_json::object();
                for (const auto& [index, prob] : l.pmf) pmf[std::to_string(index)] = prob;
                krow.push_back({{"type", "lattice"}, {"h", l.span}, {"c", l.offset}, {"pmf", pmf}});
            }
        }
        P.push_back(std::move(prow));
        K.push_back(std::move(krow));
    }
    doc["P"] = std::move(P);
    doc["kernels"] = std::move(K);
    return dump_json(doc);
}

}  // namespace mrw
