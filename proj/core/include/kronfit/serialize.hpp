#pragma once

#include <string>

#include "kronfit/kron.hpp"

namespace kronfit {

/// Render a double as "%.17g": enough digits to re-parse bit-exactly, and
/// byte-stable across runs.  Used for all CSV numeric output.
std::string format_double(double v);

/// JSON document {"dims": [d_1,...], "factors": [[row-major entries],...]}.
std::string to_json(const KronPoint& theta);

/// Parse the JSON produced by to_json; malformed documents or non-PD
/// factors raise FormatError.
KronPoint kron_point_from_json(const std::string& text);

void save_kron_point(const KronPoint& theta, const std::string& path);
KronPoint load_kron_point(const std::string& path);

}  // namespace kronfit
