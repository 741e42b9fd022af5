#pragma once

// Polynomial file format used by the CLI:
//
//   {"n": 3, "degree": 4, "terms": [[[4,0,0], "1"], [[2,2,0], "-1/5"], ...]}
//
// Coefficients are strings holding either an exact fraction "p/q" or a
// decimal literal. Exact-mode documents written by write_form_text read back
// bit-exactly; numeric documents use 17 significant digits, which also
// round-trips every double.

#include <filesystem>
#include <string>

#include "conelab/poly.hpp"

namespace conelab {

std::string write_form_text(const FormQ& f);
std::string write_form_text(const FormD& f);

FormQ read_form_exact(const std::string& text);
FormD read_form_numeric(const std::string& text);

FormQ load_form_exact(const std::filesystem::path& path);
FormD load_form_numeric(const std::filesystem::path& path);

// Writes to a sibling temporary and renames, so readers never observe a
// partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace conelab
