#ifndef P1NC_MESH_HPP
#define P1NC_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "p1nc/core.hpp"

namespace p1nc {

enum class BC { periodic, dirichlet, neumann };

const char* to_string(BC bc);

/// Uniform rectangular grid description. counts = (N_x, N_y[, N_z]),
/// lengths = side lengths of the box. Cell sizes are lengths[a]/counts[a].
struct GridSpec {
  int dim = 2;
  std::array<index_t, 3> counts{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};

  double h(int axis) const { return lengths[static_cast<std::size_t>(axis)] /
                                    static_cast<double>(counts[static_cast<std::size_t>(axis)]); }
  bool is_uniform(double rtol = 1e-12) const;
  index_t cell_count() const;
  void validate() const;  // throws InvalidSpecError
};

/// A (d-1)-face of the grid. `plane` is the lattice coordinate along the
/// normal axis; `t1`, `t2` are the cell coordinates on the transverse axes
/// in increasing axis order (t2 unused in 2D). cell0/cell1 are the incident
/// cells on the lower/upper side; cell1 = -1 on a non-periodic boundary.
struct Face {
  std::int8_t axis = 0;
  std::int32_t plane = 0, t1 = 0, t2 = 0;
  index_t cell0 = -1, cell1 = -1;
};

/// Pair of boundary faces in periodically opposite position (plane 0 and
/// plane N on `axis`). Ids are resolved against the mesh numbering; for a
/// periodic mesh both resolve to the same identified face.
struct OppositePair {
  std::int8_t axis = 0;
  std::int32_t t1 = 0, t2 = 0;
  index_t low = -1, high = -1;
};

/// Structured mesh with optional periodic identification of nodes/faces.
/// Immutable after construction; safe for concurrent reads.
class PeriodicMesh {
 public:
  GridSpec spec;
  BC bc = BC::periodic;

  index_t node_count() const { return n_nodes_; }
  index_t face_count() const { return static_cast<index_t>(faces_.size()); }
  index_t cell_count() const { return spec.cell_count(); }
  int dim() const { return spec.dim; }
  bool periodic() const { return bc == BC::periodic; }

  /// Uniform cell size; throws if the grid is not uniform.
  double h() const;

  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<OppositePair>& opposite_pairs() const { return opposite_pairs_; }

  index_t cell_id(index_t i, index_t j, index_t k = 0) const;
  std::array<index_t, 3> cell_coords(index_t c) const;
  Point cell_origin(index_t c) const;

  /// Canonical node id; periodic meshes wrap indices modulo counts.
  index_t node_id(index_t i, index_t j, index_t k = 0) const;
  std::array<index_t, 3> node_coords(index_t z) const;
  Point node_position(index_t z) const;

  /// Canonical face id; for periodic meshes the plane index wraps.
  index_t face_id(int axis, index_t plane, index_t t1, index_t t2 = 0) const;
  Point face_midpoint(index_t f) const;

  /// Faces of a cell in dice order: [x-,y-,(z-),(z+),y+,x+]; opposite pairs
  /// sit at mirrored positions (0-based indices summing to 2*dim-1).
  std::array<index_t, 6> cell_faces(index_t c) const;
  /// Corner nodes of a cell in lexicographic local order (x fastest).
  std::array<index_t, 8> cell_nodes(index_t c) const;
  /// All faces containing node z (4 in 2D, 12 in 3D).
  std::vector<index_t> node_faces(index_t z) const;
  /// Cells incident to node z in increasing id order (duplicates possible
  /// on wrapped meshes with N=1).
  std::vector<index_t> node_cells(index_t z) const;

  /// Legacy ASCII unstructured-grid export: header, points, cells,
  /// cell types. Points are the unwrapped lattice corners.
  void write_legacy_grid(std::ostream& os, const std::string& title) const;

 private:
  friend PeriodicMesh build_mesh(const GridSpec&, BC);
  index_t n_nodes_ = 0;
  std::array<index_t, 3> face_family_offset_{0, 0, 0};
  std::vector<Face> faces_;
  std::vector<OppositePair> opposite_pairs_;
};

PeriodicMesh build_mesh(const GridSpec& spec, BC bc);

std::shared_ptr<const PeriodicMesh> make_mesh(const GridSpec& spec, BC bc);

struct Coloring {
  bool exists = false;
  std::vector<std::uint8_t> color;  // 0 = red, 1 = black
  index_t n_red = 0, n_black = 0;
};

/// Red-black node coloring of a 2D mesh. On a periodic mesh the coloring
/// exists only when both counts are even; the result carries the flag.
Coloring red_black_coloring(const PeriodicMesh& mesh);

struct StripFace {
  std::int8_t axis = 0;            // normal axis of the face
  std::int32_t plane = 0, t1 = 0, t2 = 0;
  int sign = 0;
  index_t face = -1;               // resolved id in the mesh numbering
};

/// Ring of layer-boundary faces whose barycenter values satisfy one induced
/// alternating relation (2*N_mu + 2*N_nu faces for a strip perpendicular
/// to the remaining axis).
struct Strip {
  int axis = 0;
  index_t position = 0;
  std::vector<StripFace> faces;
};

/// The N_axis strips of a 3D mesh perpendicular to `axis`.
std::vector<Strip> strips(const PeriodicMesh& mesh, int axis);

/// One dice relation of a cell, as +/-1 coefficients on pre-identification
/// lattice faces; used to check the telescoping property of strips.
struct DiceRelationTerm {
  std::int8_t axis;
  std::int32_t plane, t1, t2;
  int coeff;
};
/// The two 3D dice relations of cell (i,j,k): (x-pair) - (y-pair) and
/// (x-pair) - (z-pair); in 2D the single relation (x-pair) - (y-pair).
std::vector<std::vector<DiceRelationTerm>> cell_dice_relations(
    const GridSpec& spec, index_t i, index_t j, index_t k);

}  // namespace p1nc

#endif
