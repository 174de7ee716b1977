#pragma once

// Distribution files: {"offset": int, "weights": [..]} or {"bernoulli_ps": [..]}.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dist_core.hpp"
#include "errors.hpp"
#include <nlohmann/json.hpp>

namespace ridgelab {

[[nodiscard]] inline LatticeDist parse_distribution(const nlohmann::json& j)
{
    if (!j.is_object())
        throw InvalidDistribution("distribution JSON must be an object");
    const bool has_weights = j.contains("weights");
    const bool has_ps = j.contains("bernoulli_ps");
    if (has_weights == has_ps)
        throw InvalidDistribution("expected exactly one of \"weights\" or \"bernoulli_ps\"");
    auto numbers = [](const nlohmann::json& arr, const char* key) {
        if (!arr.is_array())
            throw InvalidDistribution(std::string(key) + " must be an array");
        std::vector<double> out;
        for (const auto& v : arr) {
            if (!v.is_number())
                throw InvalidDistribution(std::string(key) + " must contain only numbers");
            out.push_back(v.get<double>());
        }
        return out;
    };
    if (has_ps)
        return LatticeDist::from_bernoulli(numbers(j.at("bernoulli_ps"), "bernoulli_ps"));
    std::int64_t offset = 0;
    if (j.contains("offset")) {
        if (!j.at("offset").is_number_integer())
            throw InvalidDistribution("offset must be an integer");
        offset = j.at("offset").get<std::int64_t>();
    }
    return LatticeDist::from_weights(offset, numbers(j.at("weights"), "weights"));
}

[[nodiscard]] inline LatticeDist parse_distribution_text(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidDistribution(std::string("malformed distribution JSON: ") + e.what());
    }
    return parse_distribution(j);
}

[[nodiscard]] inline LatticeDist load_distribution(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidDistribution("cannot open distribution file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_distribution_text(buf.str());
}

[[nodiscard]] inline nlohmann::json to_json(const LatticeDist& d)
{
    if (d.form() == LatticeDist::Form::bernoulli_product && !d.trimmed())
        return {{"bernoulli_ps", std::vector<double>(d.ps().begin(), d.ps().end())}};
    return {{"offset", d.offset()}, {"weights", std::vector<double>(d.weights().begin(), d.weights().end())}};
}

}  // namespace ridgelab
