#include "ptyopt/problem_io.hpp"

#include <fstream>
#include <sstream>

namespace ptyopt {

namespace {

using nlohmann::json;

const json& require(const json& doc, const std::string& field) {
    if (!doc.is_object()) throw ConfigError(field, "document is not a JSON object");
    auto it = doc.find(field);
    if (it == doc.end()) throw ConfigError(field, "missing");
    return *it;
}

double as_number(const json& value, const std::string& field) {
    if (!value.is_number()) throw ConfigError(field, "expected a number");
    return value.get<double>();
}

std::size_t as_count(const json& value, const std::string& field) {
    if (!value.is_number_integer() || value.get<long long>() < 0) {
        throw ConfigError(field, "expected a nonnegative integer");
    }
    return value.get<std::size_t>();
}

std::vector<double> as_number_array(const json& value, const std::string& field) {
    if (!value.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& item : value) out.push_back(as_number(item, field));
    return out;
}

}  // namespace

json complex_vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back(json::array({c.real(), c.imag()}));
    return out;
}

ComplexVector complex_vector_from_json(const json& doc, const std::string& field) {
    if (!doc.is_array() || doc.empty()) throw ConfigError(field, "expected a nonempty array of [re, im] pairs");
    std::vector<Complex> entries;
    entries.reserve(doc.size());
    for (const auto& pair : doc) {
        if (!pair.is_array() || pair.size() != 2) throw ConfigError(field, "expected [re, im] pairs");
        entries.emplace_back(as_number(pair[0], field), as_number(pair[1], field));
    }
    return ComplexVector(std::move(entries));
}

json problem_to_json(const ProblemInstance& problem) {
    const auto& shifts = problem.shifts();
    const std::size_t d = problem.dimension();
    json rows = json::array();
    for (std::size_t r = 0; r < problem.regions(); ++r) {
        auto row = problem.measurements.row(r);
        rows.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    json doc = {
        {"d", d},
        {"mode", to_string(shifts.mode())},
        {"offsets", shifts.offsets()},
        {"epsilon", problem.epsilon},
        {"alpha_T", problem.alpha_T},
        {"beta_T", problem.beta_T},
        {"p", problem.p},
        {"K", problem.K},
        {"y", rows},
    };
    if (problem.ground_truth) {
        doc["x"] = complex_vector_to_json(problem.ground_truth->object);
        doc["w"] = complex_vector_to_json(problem.ground_truth->window);
    }
    return doc;
}

ProblemInstance problem_from_json(const json& doc) {
    const std::size_t d = as_count(require(doc, "d"), "d");
    if (d == 0) throw ConfigError("d", "must be >= 1");

    const json& mode_value = require(doc, "mode");
    if (!mode_value.is_string()) throw ConfigError("mode", "expected a string");
    ShiftMode mode;
    try {
        mode = shift_mode_from_string(mode_value.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("mode", e.what());
    }

    const json& offsets_value = require(doc, "offsets");
    if (!offsets_value.is_array()) throw ConfigError("offsets", "expected an array of integers");
    std::vector<long> offsets;
    for (const auto& o : offsets_value) {
        if (!o.is_number_integer()) throw ConfigError("offsets", "expected integers");
        offsets.push_back(o.get<long>());
    }
    std::optional<ShiftSet> shifts;
    try {
        shifts.emplace(std::move(offsets), mode, d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("offsets", e.what());
    }

    const json& y_value = require(doc, "y");
    if (!y_value.is_array()) throw ConfigError("y", "expected an array");
    std::vector<double> y;
    if (!y_value.empty() && y_value.front().is_array()) {
        if (y_value.size() != shifts->count()) throw ConfigError("y", "row count must equal the number of offsets");
        for (const auto& row : y_value) {
            auto values = as_number_array(row, "y");
            if (values.size() != d) throw ConfigError("y", "each row must hold d values");
            y.insert(y.end(), values.begin(), values.end());
        }
    } else {
        y = as_number_array(y_value, "y");
    }
    std::optional<MeasurementSet> measurements;
    try {
        measurements.emplace(*shifts, std::move(y));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("y", e.what());
    }

    ProblemInstance problem{*measurements, 0.0, 0.0, 0.0, {}, 1, std::nullopt};
    problem.epsilon = as_number(require(doc, "epsilon"), "epsilon");
    problem.alpha_T = as_number(require(doc, "alpha_T"), "alpha_T");
    problem.beta_T = as_number(require(doc, "beta_T"), "beta_T");
    problem.p = as_number_array(require(doc, "p"), "p");
    problem.K = as_count(require(doc, "K"), "K");

    const bool has_x = doc.contains("x");
    const bool has_w = doc.contains("w");
    if (has_x != has_w) throw ConfigError(has_x ? "w" : "x", "x and w must be given together");
    if (has_x) {
        problem.ground_truth =
            GroundTruth{complex_vector_from_json(doc.at("x"), "x"), complex_vector_from_json(doc.at("w"), "w")};
    }

    try {
        problem.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ConfigError(colon == std::string::npos ? "problem" : msg.substr(0, colon), msg);
    }
    return problem;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void save_problem(const ProblemInstance& problem, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << dump_json(problem_to_json(problem));
}

ProblemInstance load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("problem", std::string("invalid JSON: ") + e.what());
    }
    return problem_from_json(doc);
}

}  // namespace ptyopt
