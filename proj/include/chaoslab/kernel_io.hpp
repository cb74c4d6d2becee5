#pragma once

#include <iosfwd>
#include <string>

#include "chaoslab/kernel.hpp"

namespace chaoslab {

// Flat text format:
//   q N
//   m_1 ... m_N
//   N^q values, one per line, row-major, 17 significant digits.

void write_kernel(std::ostream& out, const PiecewiseKernel& f);
PiecewiseKernel read_kernel(std::istream& in);

void save_kernel(const std::string& path, const PiecewiseKernel& f);
PiecewiseKernel load_kernel(const std::string& path);

}  // namespace chaoslab
