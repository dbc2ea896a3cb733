#include "filterlab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "filterlab/errors.hpp"

namespace filterlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': expected a number, got '" + value + "'",
                     line);
  }
}

int parse_int(const std::string& key, const std::string& value, int line) {
  const double v = parse_number(key, value, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ParseError("key '" + key + "': expected an integer, got '" + value + "'",
                     line);
  return i;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value, int line) {
  try {
    // stoull would wrap "-1" around instead of rejecting it
    if (value.find('-') != std::string::npos) throw std::invalid_argument(value);
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("key '" + key + "': expected a nonnegative integer, got '" +
                         value + "'",
                     line);
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  // Grid fields accumulate separately because GridSpec validates on build.
  double grid_lower = config.grid.lower;
  double grid_upper = config.grid.upper;
  int grid_points = config.grid.points;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "grid" && section != "perturbation" &&
          section != "experiment")
        throw ParseError("unknown section '" + section + "'", line_no);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (value.empty())
      throw ParseError("key '" + key + "': empty value", line_no);
    if (section.empty())
      throw ParseError("key '" + key + "' appears before any section", line_no);

    if (section == "model") {
      if (key == "preset")
        config.preset = value;
      else if (key == "obs_gain")
        config.obs_gain = parse_number(key, value, line_no);
      else
        throw ParseError("unknown key '" + key + "' in [model]", line_no);
    } else if (section == "grid") {
      if (key == "lower")
        grid_lower = parse_number(key, value, line_no);
      else if (key == "upper")
        grid_upper = parse_number(key, value, line_no);
      else if (key == "points")
        grid_points = parse_int(key, value, line_no);
      else if (key == "truncation_gate")
        config.truncation_gate = parse_number(key, value, line_no);
      else
        throw ParseError("unknown key '" + key + "' in [grid]", line_no);
    } else if (section == "perturbation") {
      if (key == "epsilon")
        config.perturbation_eps = parse_number(key, value, line_no);
      else if (key == "support_radius")
        config.perturbation_radius = parse_number(key, value, line_no);
      else
        throw ParseError("unknown key '" + key + "' in [perturbation]", line_no);
    } else {  // experiment
      if (key == "horizon")
        config.horizon = parse_int(key, value, line_no);
      else if (key == "replicas")
        config.replicas = parse_int(key, value, line_no);
      else if (key == "seed")
        config.seed = parse_seed(key, value, line_no);
      else if (key == "c")
        config.c = parse_number(key, value, line_no);
      else if (key == "radius")
        config.radius = parse_number(key, value, line_no);
      else if (key == "mu0")
        config.mu0 = InitialDistribution::from_descriptor(value);
      else if (key == "nu0")
        config.nu0 = InitialDistribution::from_descriptor(value);
      else
        throw ParseError("unknown key '" + key + "' in [experiment]", line_no);
    }
  }

  config.grid = GridSpec(grid_lower, grid_upper, grid_points);
  config.validate();
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace filterlab
