#pragma once

#include <istream>
#include <string>

#include "kpsd/symmat.hpp"

namespace kpsd {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Text format: '#' comment lines, then n, then n rows of n numbers.
/// Asymmetry up to 1e-9*max(1,max|entry|) is symmetrized as (M+M^T)/2;
/// anything larger is rejected.
SymMatrix parse_matrix_text(std::istream& in);

SymMatrix read_matrix_file(const std::string& path);

std::string write_matrix_text(const SymMatrix& m);

} // namespace kpsd
