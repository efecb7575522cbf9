#pragma once

#include <cstdint>
#include <vector>

#include "subrad/rng.hpp"
#include "subrad/types.hpp"

namespace subrad {

enum class GeometryKind { Square, Sunflower, Ring };

const char* to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& s);

/// Generator parameters: atom count parameter n and distance parameter a
/// (grid spacing, mean nearest-neighbor distance, or ring radius, in lambda0).
struct GeometrySpec {
  GeometryKind kind = GeometryKind::Ring;
  int n = 12;
  Real a = 0.45;
  CVec3 dipole = default_dipole();

  static CVec3 default_dipole();  // (1, i, 0)/sqrt(2)
};

/// An atomic configuration with one designated storage atom. Positions are in
/// units of lambda0; all atoms share the dipole orientation; gamma0 sets the
/// time unit.
struct AtomArray {
  std::vector<Vec3> positions;
  int storage_index = 0;
  CVec3 dipole = GeometrySpec::default_dipole();
  Real gamma0 = kDefaultGamma0;
  Real omega0 = kDefaultOmega0;

  int size() const { return static_cast<int>(positions.size()); }
  const Vec3& storage_position() const { return positions.at(storage_index); }

  /// Throws Error if any invariant is violated (finite distinct positions,
  /// unit dipole, valid storage index, positive rates).
  void validate() const;
};

/// n x n grid with spacing a*lambda0, centered on the origin. Odd n: the
/// central grid site is the storage atom (N = n^2). Even n: the grid has no
/// central site, so the storage atom is added at the origin (N = n^2 + 1).
AtomArray make_square(const GeometrySpec& spec);

/// Golden-angle spiral: atom j at polar (sqrt(j)*r_c, j*pi*(3-sqrt(5))),
/// j = 1..n^2, storage atom at the origin (index 0). r_c is solved by
/// bisection so that the mean nearest-neighbor distance over all atoms
/// equals a*lambda0.
AtomArray make_sunflower(const GeometrySpec& spec);

/// n atoms equally spaced on a circle of radius a*lambda0 in the z = 0
/// plane, storage atom at the center (index 0). N = n + 1.
AtomArray make_ring(const GeometrySpec& spec);

/// Dispatch on spec.kind.
AtomArray make_geometry(const GeometrySpec& spec);

enum class PerturbScope {
  SurroundingOnly,  // keep the storage atom fixed
  AllAtoms,
};

/// Independent Gaussian displacement of each selected atom: per-axis
/// deviation sigma_xy on x and y, sigma_z on z. Draws exactly three normals
/// per displaced atom in index order, so the output is a pure function of
/// the sampler state.
AtomArray perturb(const AtomArray& array, Real sigma_xy, Real sigma_z,
                  GaussianSampler& rng,
                  PerturbScope scope = PerturbScope::SurroundingOnly);

/// Minimum over all pairs of |r_j - r_j'|. Requires N >= 2.
Real min_pair_distance(const AtomArray& array);

/// Uniform rescale of all positions so that min_pair_distance == rmin.
/// Exact for the generator families above (storage at the scaling center).
AtomArray scaled_to_min_distance(const AtomArray& array, Real rmin);

}  // namespace subrad
