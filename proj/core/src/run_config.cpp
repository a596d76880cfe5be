#include "stmesh/run_config.hpp"

#include <fstream>
#include <sstream>

namespace stmesh {

std::vector<double> RunConfig::time_partition() const {
  if (!levels.empty()) return levels;
  std::vector<double> out;
  for (int k = 0; k <= slabs; ++k) out.push_back(T * k / slabs);
  return out;
}

void RunConfig::validate() const {
  if (!(T > 0.0)) throw Error("config: T must be positive");
  if (slabs < 1) throw Error("config: slabs must be >= 1");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1])) throw Error("config: levels must be increasing");
  for (double t : slice_times)
    if (t < 0.0 || t > (levels.empty() ? T : levels.back()))
      throw Error("config: slice time outside [0, T]");
  if (motion != "none" && motion != "pump" && motion != "ypipe")
    throw Error("config: unknown motion '" + motion + "'");
  if (problem != "none" && problem != "manufactured" && problem != "pump" && problem != "ypipe")
    throw Error("config: unknown problem '" + problem + "'");
  if (smoothing != "laplacian" && smoothing != "boundary")
    throw Error("config: unknown smoothing '" + smoothing + "'");
  solver.validate();
}

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParseError("config: expected a boolean, got '" + text + "'");
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto eq = raw.find('=');
    if (raw.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << line_number << ": expected key = value";
      throw ParseError(msg.str());
    }
    auto trim = [](std::string s) {
      const auto begin = s.find_first_not_of(" \t\r\n");
      const auto end = s.find_last_not_of(" \t\r\n");
      return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
    };
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    try {
      if (key == "T") {
        config.T = std::stod(value);
      } else if (key == "slabs") {
        config.slabs = std::stoi(value);
      } else if (key == "levels") {
        config.levels = parse_double_list(value);
      } else if (key == "motion") {
        config.motion = value;
      } else if (key == "motion_amplitude") {
        config.motion_amplitude = std::stod(value);
      } else if (key == "membrane_radius") {
        config.membrane_radius = std::stod(value);
      } else if (key == "pump_z_only") {
        config.pump_z_only = parse_bool(value);
      } else if (key == "smoothing") {
        config.smoothing = value;
      } else if (key == "problem") {
        config.problem = value;
      } else if (key == "nu") {
        config.nu = std::stod(value);
      } else if (key == "manufactured_cells") {
        config.manufactured_cells = std::stoi(value);
      } else if (key == "refinements") {
        config.refinements = std::stoi(value);
      } else if (key == "sigma_u") {
        config.solver.sigma_u = std::stod(value);
      } else if (key == "sigma_p") {
        config.solver.sigma_p = std::stod(value);
      } else if (key == "gmres_restart") {
        config.solver.gmres.restart = std::stoi(value);
      } else if (key == "gmres_max_iter") {
        config.solver.gmres.max_iter = std::stoi(value);
      } else if (key == "gmres_tol") {
        config.solver.gmres.rel_tol = std::stod(value);
      } else if (key == "preconditioner") {
        if (value == "none") {
          config.solver.preconditioner = PreconditionerKind::None;
        } else if (value == "blockdiag") {
          config.solver.preconditioner = PreconditionerKind::BlockDiag;
        } else {
          throw ParseError("unknown preconditioner '" + value + "'");
        }
      } else if (key == "out_dir") {
        config.out_dir = value;
      } else if (key == "slices") {
        config.slice_times = parse_double_list(value);
      } else if (key == "export_matrices") {
        config.export_matrices = parse_bool(value);
      } else if (key == "check_input") {
        config.check_input = parse_bool(value);
      } else {
        throw ParseError("unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      std::ostringstream msg;
      msg << "config line " << line_number << ": cannot parse value for '" << key << "'";
      throw ParseError(msg.str());
    }
  }
  return config;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  return parse_run_config(in);
}

}  // namespace stmesh
