#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bpv {

// Nonnegative cell values on a uniform lattice. Cell i along axis k has
// center origin[k] + i*h; the last axis varies fastest in `values`.
struct GridFunction {
  int n = 2;
  std::vector<int> shape;
  std::vector<double> origin;
  double h = 1.0;
  std::vector<double> values;

  size_t size() const;
  double cell_volume() const;
  void center(size_t flat, double* x) const;
  void unflatten(size_t flat, int* idx) const;
  size_t flatten(const int* idx) const;
};

// Lattice whose cells tile [-shape*h/2, shape*h/2] per axis; 0 is a vertex
// when every extent is even. Values are zero.
GridFunction centered_grid(int n, const std::vector<int>& shape, double h);

void validate(const GridFunction& u);
bool boundary_vanishing(const GridFunction& u);
// Flat index of the cell whose open interior contains 0, or -1.
long long origin_cell(const GridFunction& u);

GridFunction parse_grid(const std::string& text);
std::string format_grid(const GridFunction& u);
GridFunction read_grid_file(const std::string& path);
void write_grid_file(const GridFunction& u, const std::string& path);

}  // namespace bpv
