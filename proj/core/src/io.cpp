#include "fplab/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fplab {

namespace {

std::string snap_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu.csv", k);
  return buf;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

double parse_header_value(const std::string& line, const std::string& key) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos)
    throw std::runtime_error("missing header key '" + key + "' in: " + line);
  return std::stod(line.substr(pos + key.size() + 1));
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ostringstream out;
  out << "# fplab mesh v1\n";
  out << "# n=" << mesh.dim << "\n";
  out << "# h=" << format_double(mesh.h) << "\n";
  for (int d = 0; d < mesh.dim; ++d)
    out << "# extent" << d << "=" << format_double(mesh.lo[d]) << ":"
        << format_double(mesh.hi[d]) << "\n";
  out << "# r_ext=" << format_double(mesh.r_ext) << "\n";
  out << "id";
  for (int d = 0; d < mesh.dim; ++d) out << ",x" << d;
  out << ",measure,interior\n";
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    out << i;
    for (int d = 0; d < mesh.dim; ++d) out << "," << format_double(mesh.point(i)[d]);
    out << "," << format_double(mesh.measure[i]) << ","
        << static_cast<int>(mesh.interior[i]) << "\n";
  }
  write_text_file(path, out.str());
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::getline(in, line);  // banner
  std::getline(in, line);
  const int n = static_cast<int>(parse_header_value(line, "n"));
  std::getline(in, line);
  const double h = parse_header_value(line, "h");
  Point lo{0, 0}, hi{0, 0};
  for (int d = 0; d < n; ++d) {
    std::getline(in, line);
    const auto pos = line.find('=');
    const auto colon = line.find(':', pos);
    lo[d] = std::stod(line.substr(pos + 1, colon - pos - 1));
    hi[d] = std::stod(line.substr(colon + 1));
  }
  std::getline(in, line);
  const double r_ext = parse_header_value(line, "r_ext");

  Mesh mesh = build_mesh(n, lo, hi, h, r_ext);

  std::getline(in, line);  // column header
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
  }
  if (rows != mesh.n_nodes())
    throw std::runtime_error("mesh file node table does not match its header: " + path);
  return mesh;
}

void save_field(const Field& f, const std::string& path) {
  std::ostringstream out;
  out << "# time=" << format_double(f.time) << "\n";
  out << "id,value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    out << i << "," << format_double(f.values[i]) << "\n";
  write_text_file(path, out.str());
}

Field load_field(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::getline(in, line);
  Field f;
  f.time = parse_header_value(line, "time");
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    f.values.push_back(std::stod(line.substr(comma + 1)));
  }
  return f;
}

void save_trajectory(const Trajectory& traj, const Mesh& mesh, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_mesh(mesh, dir + "/mesh.csv");
  std::ostringstream index;
  index << "step,time,file,iterations,residual,energy\n";
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    const std::string name = snap_name(k);
    save_field(traj.fields[k], dir + "/" + name);
    index << k << "," << format_double(traj.fields[k].time) << "," << name;
    if (k == 0) {
      index << ",0,0,0\n";
    } else {
      const StepDiag& d = traj.diags[k - 1];
      index << "," << d.iterations << "," << format_double(d.residual) << ","
            << format_double(d.energy) << "\n";
    }
  }
  write_text_file(dir + "/index.csv", index.str());
}

std::pair<Trajectory, Mesh> load_trajectory(const std::string& dir) {
  Mesh mesh = load_mesh(dir + "/mesh.csv");
  std::ifstream in = open_or_throw(dir + "/index.csv");
  std::string line;
  std::getline(in, line);  // header
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // step
    std::getline(row, cell, ',');  // time (snapshot carries it too)
    std::getline(row, cell, ',');  // file
    Field f = load_field(dir + "/" + cell);
    if (f.values.size() != mesh.n_nodes())
      throw std::runtime_error("snapshot size does not match the mesh: " + cell);
    StepDiag d;
    std::getline(row, cell, ',');
    d.iterations = std::stoi(cell);
    std::getline(row, cell, ',');
    d.residual = std::stod(cell);
    std::getline(row, cell, ',');
    d.energy = std::stod(cell);
    if (!traj.fields.empty()) traj.diags.push_back(d);
    traj.fields.push_back(std::move(f));
  }
  if (traj.fields.empty()) throw std::runtime_error("empty trajectory in " + dir);
  return {std::move(traj), std::move(mesh)};
}

}  // namespace fplab
