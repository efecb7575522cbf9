#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "subrad/geometry.hpp"
#include "subrad/hamiltonian.hpp"
#include "subrad/optimizer.hpp"
#include "subrad/types.hpp"

namespace subrad {

using json = nlohmann::json;

// JSON wire formats
json to_json(const GeometrySpec& spec);
GeometrySpec geometry_spec_from_json(const json& j);

json to_json(const AtomArray& array);
AtomArray atom_array_from_json(const json& j);

json to_json(const OptimizationResult& result);

/// Row-major entry dump {"n": N, "entries": [[re, im], ...]} for debugging.
json hamiltonian_to_json(const EffectiveHamiltonian& ham);
std::string hamiltonian_to_csv(const EffectiveHamiltonian& ham);

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_real(Real v);

/// FNV-1a 64-bit content hash, hex encoded.
std::string fnv1a64_hex(const std::string& bytes);

/// Accumulates output files for one run, then writes manifest.json holding
/// the resolved config, the master seed, the artifact version, and per-file
/// checksums. File contents are written byte-deterministically.
class OutputWriter {
 public:
  OutputWriter(std::filesystem::path out_dir, std::string command);

  void write_text(const std::string& filename, const std::string& content);
  void write_csv(const std::string& filename, const std::string& header,
                 const std::vector<std::vector<std::string>>& rows);
  void write_json(const std::string& filename, const json& j);

  /// Writes manifest.json with the final resolved config; call once, last.
  std::filesystem::path finish(const json& resolved_config);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::map<std::string, std::string> checksums_;
};

json load_json_file(const std::filesystem::path& path);

}  // namespace subrad
