#pragma once

#include <string>
#include <vector>

#include "barrier/jacobi_barrier.hpp"
#include "barrier/schrodinger_barrier.hpp"

namespace barrier {

struct Polyline {
  std::vector<cplx> points;
  bool closed = false;
};

/// Zero level of log|z^{n+1} -+ 1| - log|z^n -+ z| over the upper half unit
/// disk, by marching squares on a grid x grid/2 lattice. Outside the half disk
/// the field is forced positive so every contour closes.
std::vector<Polyline> emit_region_contour(int n, Branch branch, int grid);

/// Even-odd containment in the union of closed polylines.
bool region_contains(const std::vector<Polyline>& region, cplx z);

/// Sum of the areas of the closed loops.
double region_area(const std::vector<Polyline>& region);

/// Three panels: minus-branch z-plane, plus-branch z-plane, lambda-plane.
std::string render_figure1(const DiscreteBarrier& op, const DiscreteSpectrum& spectrum,
                           const std::vector<Polyline>& minus_region, const std::vector<Polyline>& plus_region);

std::string render_figure2(const ContinuousBarrier& op, const ContinuousSpectrum& spectrum);

/// Single-panel lambda-plane scatter of a discrete spectrum.
std::string render_discrete_spectrum(const DiscreteBarrier& op, const DiscreteSpectrum& spectrum);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with a logarithmic x axis.
std::string render_scan(const std::string& title, const std::string& x_label, const std::string& y_label,
                        const std::vector<Series>& series);

}  // namespace barrier
