#include "p1nc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace p1nc {

const char* to_string(BC bc) {
  switch (bc) {
    case BC::periodic: return "periodic";
    case BC::dirichlet: return "dirichlet";
    case BC::neumann: return "neumann";
  }
  return "?";
}

bool GridSpec::is_uniform(double rtol) const {
  const double h0 = h(0);
  for (int a = 1; a < dim; ++a)
    if (std::abs(h(a) - h0) > rtol * h0) return false;
  return true;
}

index_t GridSpec::cell_count() const {
  index_t n = 1;
  for (int a = 0; a < dim; ++a) n *= counts[static_cast<std::size_t>(a)];
  return n;
}

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) throw InvalidSpecError("GridSpec: dim must be 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (counts[static_cast<std::size_t>(a)] < 1)
      throw InvalidSpecError("GridSpec: counts must be positive");
    if (!(lengths[static_cast<std::size_t>(a)] > 0.0))
      throw InvalidSpecError("GridSpec: lengths must be positive");
  }
}

namespace {

inline index_t wrap(index_t i, index_t n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Transverse axes of `axis` in increasing order.
inline void transverse_axes(int axis, int dim, int& a1, int& a2) {
  a1 = (axis == 0) ? 1 : 0;
  a2 = (axis == 2) ? 1 : 2;
  if (dim == 2) a2 = 2;  // unused slot
}

}  // namespace

double PeriodicMesh::h() const {
  if (!spec.is_uniform()) throw InvalidSpecError("mesh is not uniform");
  return spec.h(0);
}

index_t PeriodicMesh::cell_id(index_t i, index_t j, index_t k) const {
  const auto& n = spec.counts;
  return i + n[0] * (j + n[1] * k);
}

std::array<index_t, 3> PeriodicMesh::cell_coords(index_t c) const {
  const auto& n = spec.counts;
  return {c % n[0], (c / n[0]) % n[1], c / (n[0] * n[1])};
}

Point PeriodicMesh::cell_origin(index_t c) const {
  const auto ijk = cell_coords(c);
  Point p{0, 0, 0};
  for (int a = 0; a < dim(); ++a)
    p[static_cast<std::size_t>(a)] = spec.h(a) * static_cast<double>(ijk[static_cast<std::size_t>(a)]);
  return p;
}

index_t PeriodicMesh::node_id(index_t i, index_t j, index_t k) const {
  const auto& n = spec.counts;
  if (periodic()) {
    i = wrap(i, n[0]);
    j = wrap(j, n[1]);
    if (dim() == 3) k = wrap(k, n[2]);
    return i + n[0] * (j + n[1] * (dim() == 3 ? k : 0));
  }
  return i + (n[0] + 1) * (j + (n[1] + 1) * (dim() == 3 ? k : 0));
}

std::array<index_t, 3> PeriodicMesh::node_coords(index_t z) const {
  const auto& n = spec.counts;
  const index_t sx = periodic() ? n[0] : n[0] + 1;
  const index_t sy = periodic() ? n[1] : n[1] + 1;
  return {z % sx, (z / sx) % sy, z / (sx * sy)};
}

Point PeriodicMesh::node_position(index_t z) const {
  const auto ijk = node_coords(z);
  Point p{0, 0, 0};
  for (int a = 0; a < dim(); ++a)
    p[static_cast<std::size_t>(a)] = spec.h(a) * static_cast<double>(ijk[static_cast<std::size_t>(a)]);
  return p;
}

index_t PeriodicMesh::face_id(int axis, index_t plane, index_t t1, index_t t2) const {
  const auto& n = spec.counts;
  const index_t na = n[static_cast<std::size_t>(axis)];
  if (periodic())
    plane = wrap(plane, na);
  const index_t planes = periodic() ? na : na + 1;
  // lattice coords (fi, fj, fk) of the face, x fastest
  index_t fi, fj, fk, si, sj;
  if (axis == 0) {
    fi = plane; fj = t1; fk = t2; si = planes; sj = n[1];
  } else if (axis == 1) {
    fi = t1; fj = plane; fk = t2; si = n[0]; sj = planes;
  } else {
    fi = t1; fj = t2; fk = plane; si = n[0]; sj = n[1];
  }
  return face_family_offset_[static_cast<std::size_t>(axis)] + fi + si * (fj + sj * fk);
}

Point PeriodicMesh::face_midpoint(index_t f) const {
  const Face& face = faces_[static_cast<std::size_t>(f)];
  int a1, a2;
  transverse_axes(face.axis, dim(), a1, a2);
  Point p{0, 0, 0};
  p[static_cast<std::size_t>(face.axis)] = spec.h(face.axis) * face.plane;
  p[static_cast<std::size_t>(a1)] = spec.h(a1) * (face.t1 + 0.5);
  if (dim() == 3) p[static_cast<std::size_t>(a2)] = spec.h(a2) * (face.t2 + 0.5);
  return p;
}

std::array<index_t, 6> PeriodicMesh::cell_faces(index_t c) const {
  const auto ijk = cell_coords(c);
  const index_t i = ijk[0], j = ijk[1], k = ijk[2];
  std::array<index_t, 6> out{};
  if (dim() == 2) {
    out[0] = face_id(0, i, j);
    out[1] = face_id(1, j, i);
    out[2] = face_id(1, j + 1, i);
    out[3] = face_id(0, i + 1, j);
  } else {
    out[0] = face_id(0, i, j, k);
    out[1] = face_id(1, j, i, k);
    out[2] = face_id(2, k, i, j);
    out[3] = face_id(2, k + 1, i, j);
    out[4] = face_id(1, j + 1, i, k);
    out[5] = face_id(0, i + 1, j, k);
  }
  return out;
}

std::array<index_t, 8> PeriodicMesh::cell_nodes(index_t c) const {
  const auto ijk = cell_coords(c);
  std::array<index_t, 8> out{};
  const int corners = 1 << dim();
  for (int cr = 0; cr < corners; ++cr)
    out[static_cast<std::size_t>(cr)] =
        node_id(ijk[0] + (cr & 1), ijk[1] + ((cr >> 1) & 1), ijk[2] + ((cr >> 2) & 1));
  return out;
}

std::vector<index_t> PeriodicMesh::node_faces(index_t z) const {
  const auto ijk = node_coords(z);
  std::vector<index_t> out;
  for (int a = 0; a < dim(); ++a) {
    int a1, a2;
    transverse_axes(a, dim(), a1, a2);
    const index_t plane = ijk[static_cast<std::size_t>(a)];
    for (int d1 = -1; d1 <= 0; ++d1) {
      index_t t1 = ijk[static_cast<std::size_t>(a1)] + d1;
      if (!periodic() && (t1 < 0 || t1 >= spec.counts[static_cast<std::size_t>(a1)])) continue;
      if (periodic()) t1 = wrap(t1, spec.counts[static_cast<std::size_t>(a1)]);
      if (dim() == 2) {
        out.push_back(face_id(a, plane, t1));
        continue;
      }
      for (int d2 = -1; d2 <= 0; ++d2) {
        index_t t2 = ijk[static_cast<std::size_t>(a2)] + d2;
        if (!periodic() && (t2 < 0 || t2 >= spec.counts[static_cast<std::size_t>(a2)])) continue;
        if (periodic()) t2 = wrap(t2, spec.counts[static_cast<std::size_t>(a2)]);
        out.push_back(face_id(a, plane, t1, t2));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<index_t> PeriodicMesh::node_cells(index_t z) const {
  const auto ijk = node_coords(z);
  std::vector<index_t> out;
  const int corners = 1 << dim();
  for (int cr = 0; cr < corners; ++cr) {
    index_t ci = ijk[0] - (cr & 1);
    index_t cj = ijk[1] - ((cr >> 1) & 1);
    index_t ck = ijk[2] - ((cr >> 2) & 1);
    if (periodic()) {
      ci = wrap(ci, spec.counts[0]);
      cj = wrap(cj, spec.counts[1]);
      if (dim() == 3) ck = wrap(ck, spec.counts[2]);
    } else {
      if (ci < 0 || ci >= spec.counts[0] || cj < 0 || cj >= spec.counts[1]) continue;
      if (dim() == 3 && (ck < 0 || ck >= spec.counts[2])) continue;
      if (dim() == 2) ck = 0;
    }
    out.push_back(cell_id(ci, cj, dim() == 3 ? ck : 0));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PeriodicMesh build_mesh(const GridSpec& spec, BC bc) {
  spec.validate();
  PeriodicMesh mesh;
  mesh.spec = spec;
  mesh.bc = bc;
  const bool per = (bc == BC::periodic);
  const auto& n = spec.counts;

  if (per) {
    mesh.n_nodes_ = n[0] * n[1] * (spec.dim == 3 ? n[2] : 1);
  } else {
    mesh.n_nodes_ = (n[0] + 1) * (n[1] + 1) * (spec.dim == 3 ? n[2] + 1 : 1);
  }

  // face family offsets
  index_t offset = 0;
  for (int a = 0; a < spec.dim; ++a) {
    mesh.face_family_offset_[static_cast<std::size_t>(a)] = offset;
    index_t count = per ? n[static_cast<std::size_t>(a)] : n[static_cast<std::size_t>(a)] + 1;
    for (int b = 0; b < spec.dim; ++b)
      if (b != a) count *= n[static_cast<std::size_t>(b)];
    offset += count;
  }
  mesh.faces_.resize(static_cast<std::size_t>(offset));

  for (int a = 0; a < spec.dim; ++a) {
    int a1, a2;
    transverse_axes(a, spec.dim, a1, a2);
    const index_t na = n[static_cast<std::size_t>(a)];
    const index_t planes = per ? na : na + 1;
    const index_t n1 = n[static_cast<std::size_t>(a1)];
    const index_t n2 = (spec.dim == 3) ? n[static_cast<std::size_t>(a2)] : 1;
    for (index_t t2 = 0; t2 < n2; ++t2)
      for (index_t t1 = 0; t1 < n1; ++t1)
        for (index_t p = 0; p < planes; ++p) {
          const index_t f = mesh.face_id(a, p, t1, t2);
          Face& face = mesh.faces_[static_cast<std::size_t>(f)];
          face.axis = static_cast<std::int8_t>(a);
          face.plane = static_cast<std::int32_t>(p);
          face.t1 = static_cast<std::int32_t>(t1);
          face.t2 = static_cast<std::int32_t>(t2);
          std::array<index_t, 3> lo{}, hi{};
          lo[static_cast<std::size_t>(a1)] = t1;
          hi[static_cast<std::size_t>(a1)] = t1;
          lo[static_cast<std::size_t>(a2)] = t2;
          hi[static_cast<std::size_t>(a2)] = t2;
          lo[static_cast<std::size_t>(a)] = per ? wrap(p - 1, na) : p - 1;
          hi[static_cast<std::size_t>(a)] = p;
          if (!per && p == na) hi[static_cast<std::size_t>(a)] = -1;
          face.cell0 = (lo[static_cast<std::size_t>(a)] < 0)
                           ? -1
                           : mesh.cell_id(lo[0], lo[1], lo[2]);
          face.cell1 = (hi[static_cast<std::size_t>(a)] < 0)
                           ? -1
                           : mesh.cell_id(hi[0], hi[1], hi[2]);
        }
  }

  for (int a = 0; a < spec.dim; ++a) {
    int a1, a2;
    transverse_axes(a, spec.dim, a1, a2);
    const index_t n1 = n[static_cast<std::size_t>(a1)];
    const index_t n2 = (spec.dim == 3) ? n[static_cast<std::size_t>(a2)] : 1;
    for (index_t t2 = 0; t2 < n2; ++t2)
      for (index_t t1 = 0; t1 < n1; ++t1) {
        OppositePair pair;
        pair.axis = static_cast<std::int8_t>(a);
        pair.t1 = static_cast<std::int32_t>(t1);
        pair.t2 = static_cast<std::int32_t>(t2);
        pair.low = mesh.face_id(a, 0, t1, t2);
        pair.high = mesh.face_id(a, n[static_cast<std::size_t>(a)], t1, t2);
        mesh.opposite_pairs_.push_back(pair);
      }
  }
  return mesh;
}

std::shared_ptr<const PeriodicMesh> make_mesh(const GridSpec& spec, BC bc) {
  return std::make_shared<const PeriodicMesh>(build_mesh(spec, bc));
}

Coloring red_black_coloring(const PeriodicMesh& mesh) {
  if (mesh.dim() != 2)
    throw UnsupportedError("red_black_coloring: 2D meshes only");
  Coloring col;
  if (mesh.periodic() &&
      (mesh.spec.counts[0] % 2 != 0 || mesh.spec.counts[1] % 2 != 0)) {
    col.exists = false;  // odd cycle around the torus
    return col;
  }
  col.exists = true;
  col.color.resize(static_cast<std::size_t>(mesh.node_count()));
  for (index_t z = 0; z < mesh.node_count(); ++z) {
    const auto ij = mesh.node_coords(z);
    const std::uint8_t c = static_cast<std::uint8_t>((ij[0] + ij[1]) % 2);
    col.color[static_cast<std::size_t>(z)] = c;
    if (c == 0)
      ++col.n_red;
    else
      ++col.n_black;
  }
  return col;
}

std::vector<std::vector<DiceRelationTerm>> cell_dice_relations(
    const GridSpec& spec, index_t i, index_t j, index_t k) {
  // x-pair of cell (i,j,k): planes i, i+1 with transverse (j,k); likewise y,z.
  auto pair_terms = [&](int axis, int coeff) {
    std::vector<DiceRelationTerm> t;
    index_t plane0, tt1, tt2;
    if (axis == 0) { plane0 = i; tt1 = j; tt2 = k; }
    else if (axis == 1) { plane0 = j; tt1 = i; tt2 = k; }
    else { plane0 = k; tt1 = i; tt2 = j; }
    for (int s = 0; s <= 1; ++s)
      t.push_back({static_cast<std::int8_t>(axis),
                   static_cast<std::int32_t>(plane0 + s),
                   static_cast<std::int32_t>(tt1),
                   static_cast<std::int32_t>(tt2), coeff});
    return t;
  };
  std::vector<std::vector<DiceRelationTerm>> rel;
  auto appended = [&](int axis_pos, int axis_neg) {
    std::vector<DiceRelationTerm> r = pair_terms(axis_pos, +1);
    auto neg = pair_terms(axis_neg, -1);
    r.insert(r.end(), neg.begin(), neg.end());
    return r;
  };
  rel.push_back(appended(0, 1));
  if (spec.dim == 3) rel.push_back(appended(0, 2));
  return rel;
}

std::vector<Strip> strips(const PeriodicMesh& mesh, int axis) {
  if (mesh.dim() != 3)
    throw UnsupportedError("strips: 3D meshes only");
  if (axis < 0 || axis > 2) throw InvalidSpecError("strips: bad axis");
  int mu, nu;
  transverse_axes(axis, 3, mu, nu);
  const auto& n = mesh.spec.counts;
  const index_t nmu = n[static_cast<std::size_t>(mu)];
  const index_t nnu = n[static_cast<std::size_t>(nu)];

  // face lattice coords for normal axis `fa`, given cell coords by axis
  auto lattice = [&](int fa, index_t plane, std::array<index_t, 3> cell) {
    int b1, b2;
    transverse_axes(fa, 3, b1, b2);
    StripFace sf;
    sf.axis = static_cast<std::int8_t>(fa);
    sf.plane = static_cast<std::int32_t>(plane);
    sf.t1 = static_cast<std::int32_t>(cell[static_cast<std::size_t>(b1)]);
    sf.t2 = static_cast<std::int32_t>(cell[static_cast<std::size_t>(b2)]);
    sf.face = mesh.face_id(fa, plane, sf.t1, sf.t2);
    return sf;
  };

  std::vector<Strip> out;
  for (index_t layer = 0; layer < n[static_cast<std::size_t>(axis)]; ++layer) {
    Strip strip;
    strip.axis = axis;
    strip.position = layer;
    std::array<index_t, 3> cell{};
    cell[static_cast<std::size_t>(axis)] = layer;
    // mu-normal faces on planes 0 and N_mu; signs from the telescoped sum
    // of per-cell relations weighted by (-1)^(c_mu + c_nu)
    for (index_t cn = 0; cn < nnu; ++cn) {
      cell[static_cast<std::size_t>(nu)] = cn;
      cell[static_cast<std::size_t>(mu)] = 0;
      StripFace lo = lattice(mu, 0, cell);
      lo.sign = (cn % 2 == 0) ? 1 : -1;
      strip.faces.push_back(lo);
      cell[static_cast<std::size_t>(mu)] = nmu - 1;
      StripFace hi = lattice(mu, nmu, cell);
      hi.sign = ((nmu - 1 + cn) % 2 == 0) ? 1 : -1;
      strip.faces.push_back(hi);
    }
    for (index_t cm = 0; cm < nmu; ++cm) {
      cell[static_cast<std::size_t>(mu)] = cm;
      cell[static_cast<std::size_t>(nu)] = 0;
      StripFace lo = lattice(nu, 0, cell);
      lo.sign = ((cm + 1) % 2 == 0) ? 1 : -1;
      strip.faces.push_back(lo);
      cell[static_cast<std::size_t>(nu)] = nnu - 1;
      StripFace hi = lattice(nu, nnu, cell);
      hi.sign = ((cm + nnu) % 2 == 0) ? 1 : -1;
      strip.faces.push_back(hi);
    }
    out.push_back(std::move(strip));
  }
  return out;
}

void PeriodicMesh::write_legacy_grid(std::ostream& os, const std::string& title) const {
  const auto& n = spec.counts;
  const index_t px = n[0] + 1, py = n[1] + 1, pz = (dim() == 3) ? n[2] + 1 : 1;
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << px * py * pz << " double\n";
  char buf[96];
  for (index_t k = 0; k < pz; ++k)
    for (index_t j = 0; j < py; ++j)
      for (index_t i = 0; i < px; ++i) {
        std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", spec.h(0) * i,
                      spec.h(1) * j, dim() == 3 ? spec.h(2) * k : 0.0);
        os << buf;
      }
  const int corners = 1 << dim();
  os << "CELLS " << cell_count() << " " << cell_count() * (corners + 1) << "\n";
  auto pid = [&](index_t i, index_t j, index_t k) { return i + px * (j + py * k); };
  for (index_t c = 0; c < cell_count(); ++c) {
    const auto ijk = cell_coords(c);
    const index_t i = ijk[0], j = ijk[1], k = ijk[2];
    if (dim() == 2) {
      os << "4 " << pid(i, j, 0) << " " << pid(i + 1, j, 0) << " "
         << pid(i + 1, j + 1, 0) << " " << pid(i, j + 1, 0) << "\n";
    } else {
      os << "8 " << pid(i, j, k) << " " << pid(i + 1, j, k) << " "
         << pid(i + 1, j + 1, k) << " " << pid(i, j + 1, k) << " "
         << pid(i, j, k + 1) << " " << pid(i + 1, j, k + 1) << " "
         << pid(i + 1, j + 1, k + 1) << " " << pid(i, j + 1, k + 1) << "\n";
    }
  }
  os << "CELL_TYPES " << cell_count() << "\n";
  const int vtk_type = (dim() == 2) ? 9 : 12;
  for (index_t c = 0; c < cell_count(); ++c) os << vtk_type << "\n";
}

}  // namespace p1nc
