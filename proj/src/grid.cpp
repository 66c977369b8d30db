#include "bpv/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bpv/error.hpp"

namespace bpv {

size_t GridFunction::size() const {
  size_t s = 1;
  for (int e : shape) s *= static_cast<size_t>(e);
  return s;
}

double GridFunction::cell_volume() const { return std::pow(h, n); }

void GridFunction::unflatten(size_t flat, int* idx) const {
  for (int k = n - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % static_cast<size_t>(shape[k]));
    flat /= static_cast<size_t>(shape[k]);
  }
}

size_t GridFunction::flatten(const int* idx) const {
  size_t f = 0;
  for (int k = 0; k < n; ++k) f = f * static_cast<size_t>(shape[k]) + static_cast<size_t>(idx[k]);
  return f;
}

void GridFunction::center(size_t flat, double* x) const {
  int idx[16];
  unflatten(flat, idx);
  for (int k = 0; k < n; ++k) x[k] = origin[k] + idx[k] * h;
}

GridFunction centered_grid(int n, const std::vector<int>& shape, double h) {
  GridFunction g;
  g.n = n;
  g.shape = shape;
  g.h = h;
  g.origin.resize(n);
  for (int k = 0; k < n; ++k) g.origin[k] = -0.5 * (shape[k] - 1) * h;
  validate(g);
  g.values.assign(g.size(), 0.0);
  return g;
}

void validate(const GridFunction& u) {
  using E = ErrorCode;
  require(u.n >= 1 && u.n <= 16, E::InvalidArgument, "grid dimension must be in [1,16]");
  require(static_cast<int>(u.shape.size()) == u.n && static_cast<int>(u.origin.size()) == u.n, E::InvalidArgument,
          "grid shape/origin length must equal n");
  for (int e : u.shape) require(e >= 1, E::InvalidArgument, "grid extents must be positive");
  for (double o : u.origin) require(std::isfinite(o), E::InvalidArgument, "grid origin must be finite");
  require(std::isfinite(u.h) && u.h > 0, E::InvalidArgument, "cell width h must be positive");
  if (!u.values.empty()) {
    require(u.values.size() == u.size(), E::InvalidArgument, "grid value count does not match its shape");
    for (double v : u.values)
      require(std::isfinite(v) && v >= 0, E::InvalidArgument, "grid values must be finite and nonnegative");
  }
}

bool boundary_vanishing(const GridFunction& u) {
  int idx[16];
  for (size_t f = 0; f < u.values.size(); ++f) {
    if (u.values[f] == 0.0) continue;
    u.unflatten(f, idx);
    for (int k = 0; k < u.n; ++k)
      if (idx[k] == 0 || idx[k] == u.shape[k] - 1) return false;
  }
  return true;
}

long long origin_cell(const GridFunction& u) {
  int idx[16];
  for (int k = 0; k < u.n; ++k) {
    const double t = -u.origin[k] / u.h;  // fractional index of the point 0
    const double r = std::round(t);
    if (std::abs(t - r) >= 0.5 - 1e-12 || r < 0 || r >= u.shape[k]) return -1;
    idx[k] = static_cast<int>(r);
  }
  return static_cast<long long>(u.flatten(idx));
}

GridFunction parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  require(static_cast<bool>(std::getline(in, header)), ErrorCode::Parse, "grid file is empty");
  std::istringstream hs(header);
  GridFunction g;
  require(static_cast<bool>(hs >> g.n) && g.n >= 1 && g.n <= 16, ErrorCode::Parse, "grid header must start with n in [1,16]");
  g.shape.resize(g.n);
  g.origin.resize(g.n);
  for (int& e : g.shape) require(static_cast<bool>(hs >> e) && e >= 1, ErrorCode::Parse, "grid header: bad extent");
  for (double& o : g.origin) require(static_cast<bool>(hs >> o), ErrorCode::Parse, "grid header: bad origin");
  require(static_cast<bool>(hs >> g.h), ErrorCode::Parse, "grid header: missing cell width");
  std::string extra;
  require(!(hs >> extra), ErrorCode::Parse, "grid header has trailing fields");
  const size_t count = g.size();
  g.values.reserve(count);
  double v;
  while (in >> v) g.values.push_back(v);
  require(in.eof(), ErrorCode::Parse, "grid values contain a non-numeric token");
  require(g.values.size() == count, ErrorCode::Parse,
          "grid has " + std::to_string(g.values.size()) + " values, expected " + std::to_string(count));
  try {
    validate(g);
  } catch (const Error& e) {
    fail(ErrorCode::Parse, e.what());
  }
  return g;
}

std::string format_grid(const GridFunction& u) {
  validate(u);
  std::string out;
  char buf[64];
  out += std::to_string(u.n);
  for (int e : u.shape) out += " " + std::to_string(e);
  for (double o : u.origin) {
    std::snprintf(buf, sizeof buf, " %.17g", o);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, " %.17g\n", u.h);
  out += buf;
  const size_t row = static_cast<size_t>(u.shape[u.n - 1]);
  for (size_t f = 0; f < u.values.size(); ++f) {
    std::snprintf(buf, sizeof buf, "%.17g", u.values[f]);
    out += buf;
    out += ((f + 1) % row == 0) ? '\n' : ' ';
  }
  return out;
}

GridFunction read_grid_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open grid file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grid(ss.str());
}

void write_grid_file(const GridFunction& u, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write grid file: " + path);
  out << format_grid(u);
  require(static_cast<bool>(out), ErrorCode::Io, "write failed: " + path);
}

}  // namespace bpv
