#pragma once

#include <string>
#include <string_view>

#include "stochlp/lp_model.hpp"

namespace stochlp {

/// Parses the JSON instance format:
///
///   { "name": "tiny", "A": [[1, 1]], "b": [1], "c": [-1, 0], "R": 2, "L": 1 }
///
/// "R" defaults to 1 and "L" to max|c_i| when absent. Syntax errors raise
/// Errc::parse_error with the line and column in the message; shape errors
/// name the offending key or row.
LinearProgram parse_instance(std::string_view text, std::string_view source = "<input>");
LinearProgram load_instance(const std::string& path);

/// Serializes with 17 significant digits so that parse_instance reproduces the
/// program exactly. The Lipschitz bound is written only when `write_lipschitz`.
std::string write_instance(const LinearProgram& lp, bool write_lipschitz = true);
void save_instance(const LinearProgram& lp, const std::string& path);

/// printf("%.17g") of a double.
std::string format_real(double v);

}  // namespace stochlp
