#include "kfm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kfm {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  const int n_modes = traj.basis->count();
  out << "t";
  for (int k = 0; k < n_modes; ++k) out << ",re_a" << k << ",im_a" << k;
  out << ",mu,domE";
  const bool wave = !traj.energy.empty();
  if (wave) out << ",energy";
  out << "\n";
  for (size_t s = 0; s < traj.times.size(); ++s) {
    out << format_double(traj.times[s]);
    for (int k = 0; k < n_modes; ++k)
      out << "," << format_double(traj.states[s].a[k].real()) << ","
          << format_double(traj.states[s].a[k].imag());
    out << "," << format_double(traj.norm_mu[s]) << "," << format_double(traj.norm_dom_e[s]);
    if (wave) out << "," << format_double(traj.energy[s]);
    out << "\n";
  }
  return out.str();
}

namespace {

double parse_double(const std::string& field) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw std::runtime_error("csv: bad numeric field '" + field + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ParsedTrajectory trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
  auto header = split(line, ',');
  bool wave = header.back() == "energy";
  int norm_cols = wave ? 3 : 2;
  int n_modes = (static_cast<int>(header.size()) - 1 - norm_cols) / 2;
  if (n_modes < 0 || 1 + 2 * n_modes + norm_cols != static_cast<int>(header.size()))
    throw std::runtime_error("csv: malformed trajectory header");

  ParsedTrajectory parsed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (static_cast<int>(fields.size()) != static_cast<int>(header.size()))
      throw std::runtime_error("csv: row width does not match header");
    parsed.times.push_back(parse_double(fields[0]));
    std::vector<Complex> coef(n_modes);
    for (int k = 0; k < n_modes; ++k)
      coef[k] = Complex(parse_double(fields[1 + 2 * k]), parse_double(fields[2 + 2 * k]));
    parsed.coefficients.push_back(std::move(coef));
    parsed.norm_mu.push_back(parse_double(fields[1 + 2 * n_modes]));
    parsed.norm_dom_e.push_back(parse_double(fields[2 + 2 * n_modes]));
    if (wave) parsed.energy.push_back(parse_double(fields[3 + 2 * n_modes]));
  }
  return parsed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

}  // namespace kfm
