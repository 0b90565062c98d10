#pragma once

#include "nld/models.hpp"
#include "nld/symmetry.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nld {

/// Homogenized cone: every ray carries the homogenizing coordinate first.
struct Cone {
    std::size_t dim = 0;
    std::vector<std::vector<Integer>> rays;
};

struct FacetCandidate {
    std::vector<Integer> normal;          ///< primitive integer normal, normal . ray >= 0
    std::vector<std::size_t> saturating;  ///< indices of rays with normal . ray = 0
};

/// Rays (1; s_mu) of the party-symmetric projection of the model's vertices, with
/// s_mu = sum of the correlators in class mu. Duplicates are merged; rays are sorted.
Cone project_symmetric(const HybridModel& model);
/// The unprojected cone (1; correlators) of a model.
Cone full_cone(const HybridModel& model);

struct DdOptions {
    /// Insert rays in lexicographic order (otherwise in input order).
    bool lexicographic = true;
};

/// All facets of a full-dimensional cone given by its rays (double description method on
/// the polar cone, exact integers, combinatorial adjacency test). Throws
/// NotFullDimensional with the rank found otherwise.
std::vector<FacetCandidate> dd_facets(const Cone& cone, const DdOptions& options = {});

struct LiftCertificate {
    bool facet = false;
    std::size_t rank = 0;        ///< rank of the saturating full-space rays
    std::size_t needed = 0;      ///< ambient dimension - 1
    std::size_t saturating = 0;  ///< number of saturating full-space rays
};

/// Whether the homogenized normal defines a facet of the full cone: rank of the saturating
/// rays equals dim - 1. Rank is computed modulo a large prime first and settled exactly.
LiftCertificate lift_check(const std::vector<Integer>& normal, const Cone& full);
/// Lift check of a symmetric inequality against the unprojected cone of a model.
LiftCertificate lift_check(const SymmetricInequality& ineq, const HybridModel& model);

struct CatalogEntry {
    SymmetricInequality inequality;  ///< canonical representative; constant = classical bound
    std::size_t projected_rank = 0;  ///< rank of saturating projected rays
    std::size_t projected_dim = 0;   ///< homogenized dimension of the projected cone
    std::size_t orbit_size = 0;      ///< number of projected facets in this class
    std::optional<LiftCertificate> lift;
};

struct FacetOptions {
    SymmetryGroup group;
    ModelOptions model;
    bool compute_lift = true;
    /// Keep only classes that are facets of the unprojected cone as well.
    bool require_lift = false;
};

/// Nontrivial facets of the projected cone of M_h, one canonical representative per
/// symmetry class, sorted by (constant, coefficients). Facets supported on a single
/// multiset coordinate (hypercube facets) are dropped.
std::vector<CatalogEntry> enumerate_facets(const Scenario& s, const CardinalityTuple& h,
                                           const FacetOptions& options = {});
/// Same, starting from an already enumerated model.
std::vector<CatalogEntry> enumerate_facets(const HybridModel& model, const FacetOptions& options = {});

/// True when the inequality's coefficients are supported on at most one multiset.
bool is_trivial_facet(const SymmetricInequality& ineq);

/// cdd-style matrix text: optional "*" comment lines, "V-representation" or
/// "H-representation", "begin", "<rows> <cols> integer", the rows, "end".
void write_matrix(std::ostream& os, const std::vector<std::vector<Integer>>& rows,
                  const std::string& representation, const std::string& comment = {});
struct MatrixFile {
    std::string representation;
    std::vector<std::vector<Integer>> rows;
};
MatrixFile read_matrix(std::istream& is);

}  // namespace nld
