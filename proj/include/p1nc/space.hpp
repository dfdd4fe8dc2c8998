#ifndef P1NC_SPACE_HPP
#define P1NC_SPACE_HPP

#include <Eigen/Dense>
#include <vector>

#include "p1nc/core.hpp"
#include "p1nc/mesh.hpp"
#include "p1nc/sparse.hpp"

namespace p1nc {

enum class BasisKind { B, Bflat, A, Aflat, E, Eflat };

const char* to_string(BasisKind k);

/// One trial/test function: either the node-based function of `node`, or an
/// alternating function with +-1 midpoint values on the `value_axis` face
/// family. In 3D the support is the cell layer `layer` of `layer_axis`;
/// in 2D layer_axis is -1 and the support is the whole mesh.
struct BasisMember {
  bool is_node = true;
  index_t node = -1;
  int layer_axis = -1;
  index_t layer = 0;
  int value_axis = -1;
};

struct BasisCatalog {
  BasisKind kind = BasisKind::B;
  int dim = 2;
  bool exists = true;  // false when parity rules out the requested set
  std::vector<BasisMember> members;
  std::vector<index_t> dropped;  // node ids / member ordinals excluded for the flat sets
  index_t node_member_count = 0;       // node members come first
  std::vector<index_t> node_to_member; // node id -> member ordinal or -1

  index_t size() const { return static_cast<index_t>(members.size()); }
};

/// Builds the function-set catalogs. Bflat/Eflat are 2D-only (no explicit
/// complement-free node basis is known in 3D); A-kinds on parities without
/// alternating functions return exists = false.
BasisCatalog build_catalog(const PeriodicMesh& mesh, BasisKind kind);

/// Face-midpoint value table of one alternating function: +-1 on its face
/// family, 0 elsewhere. Throws NotRepresentableError on parity violation.
/// 2D: pass layer_axis = -1.
std::vector<double> alternating_function(const PeriodicMesh& mesh,
                                         int layer_axis, index_t layer,
                                         int value_axis);

/// Face-midpoint values of a single catalog member.
std::vector<double> member_face_values(const PeriodicMesh& mesh,
                                       const BasisMember& m);

/// Face-midpoint values of a coefficient combination over the catalog.
std::vector<double> combination_face_values(const PeriodicMesh& mesh,
                                            const BasisCatalog& catalog,
                                            std::span<const double> coeffs);

/// Representation matrix R: (identified faces) x (node members); R c gives
/// the face-midpoint values of the node-based combination c.
Eigen::MatrixXd representation_matrix(const PeriodicMesh& mesh,
                                      const BasisCatalog& catalog);

struct KernelVectors {
  /// Coefficient vectors over B representing the zero function.
  std::vector<std::vector<double>> representation;
  /// Stiffness kernel: the representation vectors plus the all-ones vector.
  std::vector<std::vector<double>> stiffness;
};

KernelVectors kernel_vectors(const PeriodicMesh& mesh);

/// The unique w with w . Bflat == 1 on the whole domain (2D even/even).
/// Entries lie in {0, 2}.
std::vector<double> unity_representation(const PeriodicMesh& mesh,
                                         const BasisCatalog& bflat);

/// Predicted dimensions. dim_space is dim V^h, dim V^h_0, or dim V^h_# per
/// the boundary condition.
struct DimRecord {
  index_t dim_space = 0;
  index_t dim_span_B = 0;
  index_t dim_ker_repr = 0;
  index_t dim_ker_stiffness = 0;

  bool operator==(const DimRecord&) const = default;
};

DimRecord dim_formulas(const GridSpec& spec, BC bc);

/// Ground truth by dense rank computation: dim of the space from the dice
/// constraint matrix, span/kernel of the representation map, null space of
/// the assembled stiffness matrix. Throws SizeCapError when the face count
/// exceeds `face_cap`.
DimRecord constraint_rank_oracle(const GridSpec& spec, BC bc,
                                 index_t face_cap = 20000);

/// Stiffness matrix over the node-based set B (interior nodes under
/// Dirichlet). CSR, symmetric, assembled row-parallel from the local
/// stencil.
SparseMatrix stiffness_matrix_B(const PeriodicMesh& mesh);

/// Dense pairwise energy products a_h(psi_i, psi_j) over the catalog's
/// alternating members.
Eigen::MatrixXd stiffness_matrix_A(const PeriodicMesh& mesh,
                                   const BasisCatalog& catalog);

/// Dense pairwise mass products (psi_i, psi_j)_Omega over the alternating
/// members.
Eigen::MatrixXd mass_matrix_A(const PeriodicMesh& mesh,
                              const BasisCatalog& catalog);

}  // namespace p1nc

#endif
