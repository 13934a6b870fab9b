#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "ptyopt/errors.hpp"
#include "ptyopt/model.hpp"

namespace ptyopt {

// Problem document:
//   { "d", "mode", "offsets": [...], "epsilon", "alpha_T", "beta_T",
//     "p": [...], "K", "y": [[row 0], ..., [row R-1]],
//     "x": [[re, im], ...], "w": [[re, im], ...] }   (x, w optional)
// A flat row-major "y" of length R*d is accepted on input as well.

nlohmann::json problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const nlohmann::json& doc);

std::string dump_json(const nlohmann::json& doc);

void save_problem(const ProblemInstance& problem, const std::filesystem::path& path);
ProblemInstance load_problem(const std::filesystem::path& path);

nlohmann::json complex_vector_to_json(const ComplexVector& v);
ComplexVector complex_vector_from_json(const nlohmann::json& doc, const std::string& field);

}  // namespace ptyopt
