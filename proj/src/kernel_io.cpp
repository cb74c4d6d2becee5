#include "chaoslab/kernel_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>

#include "chaoslab/errors.hpp"

namespace chaoslab {

void write_kernel(std::ostream& out, const PiecewiseKernel& f) {
  out << std::setprecision(17);
  out << f.order() << ' ' << f.cells() << '\n';
  const auto m = f.partition().masses();
  for (std::size_t i = 0; i < m.size(); ++i) out << (i ? " " : "") << m[i];
  out << '\n';
  for (double v : f.values()) out << v << '\n';
  if (!out) throw ConfigError("write_kernel: stream error");
}

PiecewiseKernel read_kernel(std::istream& in) {
  long long q = -1, n = -1;
  if (!(in >> q >> n) || q < 0 || n <= 0) throw ConfigError("read_kernel: bad header");
  std::vector<double> masses(static_cast<std::size_t>(n));
  for (auto& m : masses) {
    if (!(in >> m)) throw ConfigError("read_kernel: truncated mass line");
  }
  Partition part(std::move(masses));
  std::vector<double> values(tensor_size(part.size(), static_cast<unsigned>(q)));
  for (auto& v : values) {
    if (!(in >> v)) throw ConfigError("read_kernel: truncated value block");
  }
  double extra;
  if (in >> extra) throw ConfigError("read_kernel: trailing data");
  return PiecewiseKernel(static_cast<unsigned>(q), std::move(part), std::move(values));
}

void save_kernel(const std::string& path, const PiecewiseKernel& f) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  write_kernel(out, f);
}

PiecewiseKernel load_kernel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_kernel(in);
}

}  // namespace chaoslab
