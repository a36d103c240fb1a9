// SPDX-License-Identifier: MIT
//
// Trace serialization. CSV carries the per-iteration scalars only; JSON
// carries scalars always and full points on request. All floating-point
// text uses shortest round-trip formatting so identical runs produce
// byte-identical files.
#pragma once

#include <string>

#include "methods.hpp"

namespace pepfo {

// Columns: i, f(x_i), f(y_i), ||grad f(x_i)||, ||grad f(y_i)|| for i = 0..N.
std::string trace_to_csv(const IterateTrace& t);

std::string trace_to_json(const IterateTrace& t, bool include_points);

void write_text_file(const std::string& path, const std::string& body);

}  // namespace pepfo
