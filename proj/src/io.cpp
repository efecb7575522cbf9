#include "subrad/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "subrad/version.hpp"

namespace subrad {

namespace {

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("expected [re, im] pair");
  return Complex(j[0].get<Real>(), j[1].get<Real>());
}

json dipole_to_json(const CVec3& d) {
  return json::array(
      {complex_to_json(d(0)), complex_to_json(d(1)), complex_to_json(d(2))});
}

CVec3 dipole_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("dipole: expected three [re, im] pairs");
  return CVec3(complex_from_json(j[0]), complex_from_json(j[1]),
               complex_from_json(j[2]));
}

}  // namespace

json to_json(const GeometrySpec& spec) {
  return json{{"kind", to_string(spec.kind)},
              {"n", spec.n},
              {"a", spec.a},
              {"dipole", dipole_to_json(spec.dipole)}};
}

GeometrySpec geometry_spec_from_json(const json& j) {
  GeometrySpec spec;
  try {
    spec.kind = geometry_kind_from_string(j.at("kind").get<std::string>());
    spec.n = j.at("n").get<int>();
    spec.a = j.at("a").get<Real>();
    if (j.contains("dipole")) spec.dipole = dipole_from_json(j.at("dipole"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("geometry spec: ") + e.what());
  }
  return spec;
}

json to_json(const AtomArray& array) {
  json positions = json::array();
  for (const Vec3& p : array.positions)
    positions.push_back(json::array({p(0), p(1), p(2)}));
  return json{{"positions", positions},
              {"storage_index", array.storage_index},
              {"dipole", dipole_to_json(array.dipole)},
              {"gamma0", array.gamma0},
              {"omega0", array.omega0}};
}

AtomArray atom_array_from_json(const json& j) {
  AtomArray out;
  try {
    out.positions.clear();
    for (const json& p : j.at("positions")) {
      if (!p.is_array() || p.size() != 3)
        throw ConfigError("positions: expected [x, y, z]");
      out.positions.emplace_back(p[0].get<Real>(), p[1].get<Real>(),
                                 p[2].get<Real>());
    }
    out.storage_index = j.at("storage_index").get<int>();
    out.dipole = dipole_from_json(j.at("dipole"));
    out.gamma0 = j.value("gamma0", kDefaultGamma0);
    out.omega0 = j.value("omega0", kDefaultOmega0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("atom array: ") + e.what());
  }
  out.validate();
  return out;
}

json to_json(const OptimizationResult& result) {
  return json{{"structure", to_json(result.final)},
              {"F_initial", result.F_initial},
              {"F_final", result.F_final},
              {"feasible", result.feasible},
              {"converged", result.converged},
              {"seed_id", result.seed_id},
              {"iterations_used", result.iterations_used},
              {"cost_evaluations", result.cost_evaluations},
              {"message", result.message}};
}

json hamiltonian_to_json(const EffectiveHamiltonian& ham) {
  json entries = json::array();
  for (int i = 0; i < ham.n_atoms; ++i) {
    for (int j = 0; j < ham.n_atoms; ++j) {
      entries.push_back(json::array({ham.H(i, j).real(), ham.H(i, j).imag()}));
    }
  }
  return json{{"n", ham.n_atoms}, {"entries", entries}};
}

std::string hamiltonian_to_csv(const EffectiveHamiltonian& ham) {
  std::string out = "row,col,re,im\n";
  for (int i = 0; i < ham.n_atoms; ++i) {
    for (int j = 0; j < ham.n_atoms; ++j) {
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             format_real(ham.H(i, j).real()) + "," +
             format_real(ham.H(i, j).imag()) + "\n";
    }
  }
  return out;
}

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

OutputWriter::OutputWriter(std::filesystem::path out_dir, std::string command)
    : dir_(std::move(out_dir)), command_(std::move(command)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir_.string());
}

void OutputWriter::write_text(const std::string& filename,
                              const std::string& content) {
  std::ofstream f(dir_ / filename, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + filename);
  f << content;
  if (!f) throw Error("write failed: " + filename);
  checksums_[filename] = "fnv1a64:" + fnv1a64_hex(content);
}

void OutputWriter::write_csv(const std::string& filename,
                             const std::string& header,
                             const std::vector<std::vector<std::string>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  write_text(filename, out);
}

void OutputWriter::write_json(const std::string& filename, const json& j) {
  write_text(filename, j.dump(2) + "\n");
}

std::filesystem::path OutputWriter::finish(const json& resolved_config) {
  json manifest{{"artifact_version", kVersion},
                {"command", command_},
                {"config", resolved_config},
                {"files", checksums_}};
  const std::filesystem::path path = dir_ / "manifest.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write manifest.json");
  f << manifest.dump(2) << "\n";
  return path;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace subrad
