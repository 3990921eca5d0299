#pragma once

#include <string>
#include <utility>

#include "fplab/geometry.hpp"
#include "fplab/operator.hpp"
#include "fplab/solver.hpp"

namespace fplab {

/// Doubles are written with 17 significant digits so every file round-trips
/// bit-exactly.
std::string format_double(double v);

void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

/// Writes mesh.csv, snap_NNNNNN.csv per snapshot and index.csv (step, time,
/// file, iterations, residual, energy) into dir.
void save_trajectory(const Trajectory& traj, const Mesh& mesh, const std::string& dir);
std::pair<Trajectory, Mesh> load_trajectory(const std::string& dir);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fplab
