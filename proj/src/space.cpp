#include "p1nc/space.hpp"

#include <algorithm>
#include <cmath>

#include "p1nc/drazin.hpp"
#include "p1nc/element.hpp"
#include "p1nc/kernels.hpp"
#include "p1nc/quadrature.hpp"

namespace p1nc {

const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::B: return "B";
    case BasisKind::Bflat: return "Bflat";
    case BasisKind::A: return "A";
    case BasisKind::Aflat: return "Aflat";
    case BasisKind::E: return "E";
    case BasisKind::Eflat: return "Eflat";
  }
  return "?";
}

namespace {

inline void transverse_axes(int axis, int dim, int& a1, int& a2) {
  a1 = (axis == 0) ? 1 : 0;
  a2 = (axis == 2) ? 1 : 2;
  if (dim == 2) a2 = 2;
}

// Corner nodes of a face, canonicalized; duplicates are kept (they occur on
// wrapped meshes with a count of 1 and carry multiplicity).
int face_corner_nodes(const PeriodicMesh& mesh, const Face& face,
                      std::array<index_t, 4>& out) {
  int a1, a2;
  transverse_axes(face.axis, mesh.dim(), a1, a2);
  std::array<index_t, 3> idx{0, 0, 0};
  idx[static_cast<std::size_t>(face.axis)] = face.plane;
  int count = 0;
  for (int d1 = 0; d1 <= 1; ++d1) {
    idx[static_cast<std::size_t>(a1)] = face.t1 + d1;
    if (mesh.dim() == 2) {
      out[static_cast<std::size_t>(count++)] = mesh.node_id(idx[0], idx[1]);
      continue;
    }
    for (int d2 = 0; d2 <= 1; ++d2) {
      idx[static_cast<std::size_t>(a2)] = face.t2 + d2;
      out[static_cast<std::size_t>(count++)] = mesh.node_id(idx[0], idx[1], idx[2]);
    }
  }
  return count;
}

bool node_interior(const PeriodicMesh& mesh, index_t z) {
  const auto ijk = mesh.node_coords(z);
  for (int a = 0; a < mesh.dim(); ++a)
    if (ijk[static_cast<std::size_t>(a)] == 0 ||
        ijk[static_cast<std::size_t>(a)] == mesh.spec.counts[static_cast<std::size_t>(a)])
      return false;
  return true;
}

std::vector<BasisMember> node_members(const PeriodicMesh& mesh) {
  std::vector<BasisMember> out;
  for (index_t z = 0; z < mesh.node_count(); ++z) {
    if (mesh.bc == BC::dirichlet && !node_interior(mesh, z)) continue;
    BasisMember m;
    m.is_node = true;
    m.node = z;
    out.push_back(m);
  }
  return out;
}

// Alternating members in catalog order: grouped by value axis, then by
// layer axis, then by layer. Empty when the parities rule all of them out.
std::vector<BasisMember> alternating_members(const PeriodicMesh& mesh) {
  const auto& n = mesh.spec.counts;
  std::vector<BasisMember> out;
  if (mesh.dim() == 2) {
    if (n[0] % 2 == 0 && n[1] % 2 == 0) {
      for (int axis = 0; axis < 2; ++axis) {
        BasisMember m;
        m.is_node = false;
        m.layer_axis = -1;
        m.value_axis = axis;
        out.push_back(m);
      }
    }
    return out;
  }
  int odd_count = 0, odd_axis = -1;
  for (int a = 0; a < 3; ++a)
    if (n[static_cast<std::size_t>(a)] % 2 != 0) {
      ++odd_count;
      odd_axis = a;
    }
  if (odd_count >= 2) return out;
  for (int value = 0; value < 3; ++value) {
    for (int layer_axis = 0; layer_axis < 3; ++layer_axis) {
      if (layer_axis == value) continue;
      if (odd_count == 1 && layer_axis != odd_axis) continue;
      const int lambda = 3 - value - layer_axis;
      if (n[static_cast<std::size_t>(value)] % 2 != 0 ||
          n[static_cast<std::size_t>(lambda)] % 2 != 0)
        continue;
      for (index_t l = 0; l < n[static_cast<std::size_t>(layer_axis)]; ++l) {
        BasisMember m;
        m.is_node = false;
        m.layer_axis = layer_axis;
        m.layer = l;
        m.value_axis = value;
        out.push_back(m);
      }
    }
  }
  return out;
}

void fill_node_map(BasisCatalog& cat, const PeriodicMesh& mesh) {
  cat.node_to_member.assign(static_cast<std::size_t>(mesh.node_count()), -1);
  for (index_t m = 0; m < cat.size(); ++m) {
    const BasisMember& mem = cat.members[static_cast<std::size_t>(m)];
    if (!mem.is_node) break;
    cat.node_to_member[static_cast<std::size_t>(mem.node)] = m;
    ++cat.node_member_count;
  }
}

}  // namespace

BasisCatalog build_catalog(const PeriodicMesh& mesh, BasisKind kind) {
  BasisCatalog cat;
  cat.kind = kind;
  cat.dim = mesh.dim();
  const auto& n = mesh.spec.counts;
  const bool even2d =
      mesh.dim() == 2 && n[0] % 2 == 0 && n[1] % 2 == 0 && mesh.periodic();

  switch (kind) {
    case BasisKind::B: {
      cat.members = node_members(mesh);
      break;
    }
    case BasisKind::Bflat: {
      if (mesh.dim() == 3)
        throw UnsupportedError("Bflat: no explicit node basis construction in 3D");
      if (!even2d) {
        cat.exists = false;
        break;
      }
      cat.members = node_members(mesh);
      cat.dropped.push_back(cat.members.back().node);
      cat.members.pop_back();
      break;
    }
    case BasisKind::A: {
      if (!mesh.periodic()) throw UnsupportedError("A: periodic meshes only");
      cat.members = alternating_members(mesh);
      cat.exists = !cat.members.empty();
      break;
    }
    case BasisKind::Aflat: {
      if (!mesh.periodic()) throw UnsupportedError("Aflat: periodic meshes only");
      cat.members = alternating_members(mesh);
      cat.exists = !cat.members.empty();
      if (!cat.exists) break;
      if (mesh.dim() == 3) {
        bool all_even = n[0] % 2 == 0 && n[1] % 2 == 0 && n[2] % 2 == 0;
        if (all_even) {
          // one redundant member per value-axis family: drop the last
          std::vector<BasisMember> kept;
          for (int value = 2; value >= 0; --value) {
            index_t last = -1;
            for (index_t m = 0; m < cat.size(); ++m)
              if (cat.members[static_cast<std::size_t>(m)].value_axis == value) last = m;
            cat.dropped.push_back(last);
          }
          std::sort(cat.dropped.begin(), cat.dropped.end());
          for (index_t m = 0; m < cat.size(); ++m)
            if (!std::binary_search(cat.dropped.begin(), cat.dropped.end(), m))
              kept.push_back(cat.members[static_cast<std::size_t>(m)]);
          cat.members = std::move(kept);
        }
      }
      break;
    }
    case BasisKind::E: {
      if (!mesh.periodic()) throw UnsupportedError("E: periodic meshes only");
      auto alt = alternating_members(mesh);
      if (alt.empty()) {
        cat.exists = false;
        break;
      }
      cat.members = node_members(mesh);
      cat.members.insert(cat.members.end(), alt.begin(), alt.end());
      break;
    }
    case BasisKind::Eflat: {
      if (mesh.dim() == 3)
        throw UnsupportedError("Eflat: requires Bflat, unavailable in 3D");
      if (!even2d) {
        cat.exists = false;
        break;
      }
      BasisCatalog bflat = build_catalog(mesh, BasisKind::Bflat);
      cat.members = std::move(bflat.members);
      cat.dropped = std::move(bflat.dropped);
      auto alt = alternating_members(mesh);
      cat.members.insert(cat.members.end(), alt.begin(), alt.end());
      break;
    }
  }
  if (cat.exists) fill_node_map(cat, mesh);
  return cat;
}

std::vector<double> alternating_function(const PeriodicMesh& mesh,
                                         int layer_axis, index_t layer,
                                         int value_axis) {
  if (!mesh.periodic())
    throw UnsupportedError("alternating_function: periodic meshes only");
  const auto& n = mesh.spec.counts;
  std::vector<double> vals(static_cast<std::size_t>(mesh.face_count()), 0.0);

  if (mesh.dim() == 2) {
    if (layer_axis != -1)
      throw InvalidSpecError("alternating_function: no layer axis in 2D");
    if (value_axis < 0 || value_axis > 1)
      throw InvalidSpecError("alternating_function: bad value axis");
    if (n[static_cast<std::size_t>(value_axis)] % 2 != 0)
      throw NotRepresentableError("alternating_function: value-axis count must be even");
    const int other = 1 - value_axis;
    for (index_t p = 0; p < n[static_cast<std::size_t>(value_axis)]; ++p)
      for (index_t t = 0; t < n[static_cast<std::size_t>(other)]; ++t)
        vals[static_cast<std::size_t>(mesh.face_id(value_axis, p, t))] =
            ((p + t) % 2 == 0) ? 1.0 : -1.0;
    return vals;
  }

  if (layer_axis < 0 || layer_axis > 2 || value_axis < 0 || value_axis > 2 ||
      layer_axis == value_axis)
    throw InvalidSpecError("alternating_function: bad axes");
  if (layer < 0 || layer >= n[static_cast<std::size_t>(layer_axis)])
    throw InvalidSpecError("alternating_function: layer out of range");
  const int lambda = 3 - layer_axis - value_axis;
  if (n[static_cast<std::size_t>(value_axis)] % 2 != 0 ||
      n[static_cast<std::size_t>(lambda)] % 2 != 0)
    throw NotRepresentableError(
        "alternating_function: both transverse counts must be even");

  int b1, b2;
  transverse_axes(value_axis, 3, b1, b2);
  for (index_t p = 0; p < n[static_cast<std::size_t>(value_axis)]; ++p)
    for (index_t t2 = 0; t2 < n[static_cast<std::size_t>(b2)]; ++t2)
      for (index_t t1 = 0; t1 < n[static_cast<std::size_t>(b1)]; ++t1) {
        const index_t t_layer = (b1 == layer_axis) ? t1 : t2;
        if (t_layer != layer) continue;
        const index_t t_lambda = (b1 == lambda) ? t1 : t2;
        vals[static_cast<std::size_t>(mesh.face_id(value_axis, p, t1, t2))] =
            ((p + t_lambda) % 2 == 0) ? 1.0 : -1.0;
      }
  return vals;
}

std::vector<double> member_face_values(const PeriodicMesh& mesh,
                                       const BasisMember& m) {
  if (!m.is_node)
    return alternating_function(mesh, m.layer_axis, m.layer, m.value_axis);
  std::vector<double> vals(static_cast<std::size_t>(mesh.face_count()), 0.0);
  const auto& faces = mesh.faces();
  for (index_t f = 0; f < mesh.face_count(); ++f) {
    std::array<index_t, 4> corners{};
    const int nc = face_corner_nodes(mesh, faces[static_cast<std::size_t>(f)], corners);
    for (int c = 0; c < nc; ++c)
      if (corners[static_cast<std::size_t>(c)] == m.node)
        vals[static_cast<std::size_t>(f)] += 0.5;
  }
  return vals;
}

std::vector<double> combination_face_values(const PeriodicMesh& mesh,
                                            const BasisCatalog& catalog,
                                            std::span<const double> coeffs) {
  if (static_cast<index_t>(coeffs.size()) != catalog.size())
    throw InvalidSpecError("combination_face_values: coefficient size mismatch");
  std::vector<double> vals(static_cast<std::size_t>(mesh.face_count()), 0.0);
  const auto& faces = mesh.faces();
  const index_t nf = mesh.face_count();
  if (catalog.node_member_count > 0) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (index_t f = 0; f < nf; ++f) {
      std::array<index_t, 4> corners{};
      const int nc = face_corner_nodes(mesh, faces[static_cast<std::size_t>(f)], corners);
      double v = 0.0;
      for (int c = 0; c < nc; ++c) {
        const index_t mi = catalog.node_to_member[static_cast<std::size_t>(corners[static_cast<std::size_t>(c)])];
        if (mi >= 0) v += 0.5 * coeffs[static_cast<std::size_t>(mi)];
      }
      vals[static_cast<std::size_t>(f)] = v;
    }
  }
  for (index_t m = catalog.node_member_count; m < catalog.size(); ++m) {
    const double c = coeffs[static_cast<std::size_t>(m)];
    if (c == 0.0) continue;
    const std::vector<double> mv =
        member_face_values(mesh, catalog.members[static_cast<std::size_t>(m)]);
    for (index_t f = 0; f < nf; ++f)
      if (mv[static_cast<std::size_t>(f)] != 0.0)
        vals[static_cast<std::size_t>(f)] += c * mv[static_cast<std::size_t>(f)];
  }
  return vals;
}

Eigen::MatrixXd representation_matrix(const PeriodicMesh& mesh,
                                      const BasisCatalog& catalog) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(mesh.face_count()),
      static_cast<Eigen::Index>(catalog.node_member_count));
  const auto& faces = mesh.faces();
  for (index_t f = 0; f < mesh.face_count(); ++f) {
    std::array<index_t, 4> corners{};
    const int nc = face_corner_nodes(mesh, faces[static_cast<std::size_t>(f)], corners);
    for (int c = 0; c < nc; ++c) {
      const index_t mi = catalog.node_to_member[static_cast<std::size_t>(corners[static_cast<std::size_t>(c)])];
      if (mi >= 0)
        R(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(mi)) += 0.5;
    }
  }
  return R;
}

namespace {

// Node-plane checkerboard: (-1)^(sum of the two other coords) on the plane
// `layer` of `axis`, zero elsewhere. These span the representation kernel.
std::vector<double> plane_checkerboard(const PeriodicMesh& mesh, int axis,
                                       index_t layer) {
  std::vector<double> v(static_cast<std::size_t>(mesh.node_count()), 0.0);
  for (index_t z = 0; z < mesh.node_count(); ++z) {
    const auto ijk = mesh.node_coords(z);
    if (ijk[static_cast<std::size_t>(axis)] != layer) continue;
    index_t s = 0;
    for (int a = 0; a < mesh.dim(); ++a)
      if (a != axis) s += ijk[static_cast<std::size_t>(a)];
    v[static_cast<std::size_t>(z)] = (s % 2 == 0) ? 1.0 : -1.0;
  }
  return v;
}

}  // namespace

KernelVectors kernel_vectors(const PeriodicMesh& mesh) {
  if (!mesh.periodic())
    throw UnsupportedError("kernel_vectors: periodic meshes only");
  const auto& n = mesh.spec.counts;
  KernelVectors out;

  if (mesh.dim() == 2) {
    if (n[0] % 2 == 0 && n[1] % 2 == 0) {
      std::vector<double> v(static_cast<std::size_t>(mesh.node_count()));
      for (index_t z = 0; z < mesh.node_count(); ++z) {
        const auto ij = mesh.node_coords(z);
        v[static_cast<std::size_t>(z)] = ((ij[0] + ij[1]) % 2 == 0) ? 1.0 : -1.0;
      }
      out.representation.push_back(std::move(v));
    }
  } else {
    const bool all_even = n[0] % 2 == 0 && n[1] % 2 == 0 && n[2] % 2 == 0;
    for (int axis = 0; axis < 3; ++axis) {
      int a1, a2;
      transverse_axes(axis, 3, a1, a2);
      if (n[static_cast<std::size_t>(a1)] % 2 != 0 || n[static_cast<std::size_t>(a2)] % 2 != 0)
        continue;
      // with all counts even each family repeats the global checkerboard;
      // skip the last plane of the second and third families
      const index_t last = (all_even && axis > 0)
                               ? n[static_cast<std::size_t>(axis)] - 1
                               : n[static_cast<std::size_t>(axis)];
      for (index_t l = 0; l < last; ++l)
        out.representation.push_back(plane_checkerboard(mesh, axis, l));
    }
  }

  out.stiffness = out.representation;
  out.stiffness.emplace_back(static_cast<std::size_t>(mesh.node_count()), 1.0);

  // contract checks: representation vectors vanish at all face midpoints,
  // stiffness vectors are annihilated by the assembled matrix
  const BasisCatalog b = build_catalog(mesh, BasisKind::B);
  for (const auto& v : out.representation) {
    const std::vector<double> fv = combination_face_values(mesh, b, v);
    for (double x : fv)
      if (std::abs(x) > 1e-12)
        throw InternalError("kernel_vectors: representation vector is not in the kernel");
  }
  const SparseMatrix S = stiffness_matrix_B(mesh);
  double smax = 0.0;
  for (double v : S.val) smax = std::max(smax, std::abs(v));
  std::vector<double> y(static_cast<std::size_t>(mesh.node_count()));
  for (const auto& v : out.stiffness) {
    S.matvec(v, y);
    for (double x : y)
      if (std::abs(x) > 1e-12 * std::max(1.0, smax))
        throw InternalError("kernel_vectors: stiffness kernel residual too large");
  }
  return out;
}

std::vector<double> unity_representation(const PeriodicMesh& mesh,
                                         const BasisCatalog& bflat) {
  if (bflat.kind != BasisKind::Bflat || !bflat.exists)
    throw InvalidSpecError("unity_representation: needs a Bflat catalog");
  const index_t dropped = bflat.dropped.at(0);
  const auto dij = mesh.node_coords(dropped);
  const double kdrop = ((dij[0] + dij[1]) % 2 == 0) ? 1.0 : -1.0;
  std::vector<double> w(static_cast<std::size_t>(bflat.size()));
  for (index_t m = 0; m < bflat.size(); ++m) {
    const auto ij = mesh.node_coords(bflat.members[static_cast<std::size_t>(m)].node);
    const double kz = ((ij[0] + ij[1]) % 2 == 0) ? 1.0 : -1.0;
    w[static_cast<std::size_t>(m)] = 1.0 - kz / kdrop;
  }
  const std::vector<double> fv = combination_face_values(mesh, bflat, w);
  for (double x : fv)
    if (std::abs(x - 1.0) > 1e-12)
      throw InternalError("unity_representation: combination is not unity");
  return w;
}

DimRecord dim_formulas(const GridSpec& spec, BC bc) {
  spec.validate();
  const index_t nx = spec.counts[0], ny = spec.counts[1], nz = spec.counts[2];
  DimRecord r;
  if (spec.dim == 2) {
    switch (bc) {
      case BC::neumann: {
        const index_t nv = (nx + 1) * (ny + 1);
        r.dim_space = nv - 1;
        r.dim_span_B = nv - 1;
        r.dim_ker_repr = 1;
        r.dim_ker_stiffness = 2;
        break;
      }
      case BC::dirichlet: {
        const index_t nvi = (nx - 1) * (ny - 1);
        r.dim_space = nvi;
        r.dim_span_B = nvi;
        r.dim_ker_repr = 0;
        r.dim_ker_stiffness = 0;
        break;
      }
      case BC::periodic: {
        const index_t e = parity_even(nx) * parity_even(ny);
        r.dim_space = nx * ny + e;
        r.dim_ker_repr = e;
        r.dim_span_B = nx * ny - e;
        r.dim_ker_stiffness = e + 1;
        break;
      }
    }
    return r;
  }
  switch (bc) {
    case BC::neumann: {
      r.dim_space = nx * ny * nz + nx * ny + ny * nz + nz * nx;
      r.dim_ker_repr = nx + ny + nz + 1;
      r.dim_span_B = (nx + 1) * (ny + 1) * (nz + 1) - r.dim_ker_repr;
      r.dim_ker_stiffness = r.dim_ker_repr + 1;
      break;
    }
    case BC::dirichlet: {
      const index_t nvi = (nx - 1) * (ny - 1) * (nz - 1);
      r.dim_space = nvi;
      r.dim_span_B = nvi;
      r.dim_ker_repr = 0;
      r.dim_ker_stiffness = 0;
      break;
    }
    case BC::periodic: {
      const index_t ex = parity_even(nx), ey = parity_even(ny), ez = parity_even(nz);
      const index_t t = nx * ey * ez + ny * ex * ez + nz * ex * ey;
      r.dim_space = nx * ny * nz + t - ex * ey * ez;
      r.dim_ker_repr = t - 2 * ex * ey * ez;
      r.dim_span_B = nx * ny * nz - r.dim_ker_repr;
      r.dim_ker_stiffness = r.dim_ker_repr + 1;
      break;
    }
  }
  return r;
}

DimRecord constraint_rank_oracle(const GridSpec& spec, BC bc, index_t face_cap) {
  spec.validate();
  // geometry is irrelevant for the counts; use unit cells
  GridSpec unit = spec;
  for (int a = 0; a < spec.dim; ++a)
    unit.lengths[static_cast<std::size_t>(a)] =
        static_cast<double>(spec.counts[static_cast<std::size_t>(a)]);
  const PeriodicMesh mesh = build_mesh(unit, bc);
  if (mesh.face_count() > face_cap)
    throw SizeCapError("constraint_rank_oracle: face count exceeds the dense cap");

  DimRecord r;

  // dice constraint matrix (+ boundary value rows for Dirichlet)
  const index_t rows_per_cell = (spec.dim == 2) ? 1 : 2;
  index_t boundary_rows = 0;
  if (bc == BC::dirichlet)
    for (const auto& f : mesh.faces())
      if (f.cell0 < 0 || f.cell1 < 0) ++boundary_rows;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(mesh.cell_count() * rows_per_cell + boundary_rows),
      static_cast<Eigen::Index>(mesh.face_count()));
  index_t row = 0;
  for (index_t c = 0; c < mesh.cell_count(); ++c) {
    const auto faces = mesh.cell_faces(c);
    const int d = spec.dim;
    // pairs in dice order: (m, 2d-1-m) for axis m
    for (index_t rel = 0; rel < rows_per_cell; ++rel) {
      const int neg_axis = static_cast<int>(rel) + 1;  // x-pair minus that axis pair
      for (int s : {0, 1}) {
        D(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(faces[static_cast<std::size_t>(s * (2 * d - 1))])) += 1.0;
        const int fneg = s == 0 ? neg_axis : 2 * d - 1 - neg_axis;
        D(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(faces[static_cast<std::size_t>(fneg)])) -= 1.0;
      }
      ++row;
    }
  }
  if (bc == BC::dirichlet) {
    for (index_t f = 0; f < mesh.face_count(); ++f) {
      const Face& face = mesh.faces()[static_cast<std::size_t>(f)];
      if (face.cell0 < 0 || face.cell1 < 0)
        D(static_cast<Eigen::Index>(row++), static_cast<Eigen::Index>(f)) = 1.0;
    }
  }
  r.dim_space = mesh.face_count() - stable_rank(D);

  const BasisCatalog b = build_catalog(mesh, BasisKind::B);
  if (b.node_member_count == 0) {
    r.dim_span_B = 0;
    r.dim_ker_repr = 0;
    r.dim_ker_stiffness = 0;
    return r;
  }
  const Eigen::MatrixXd R = representation_matrix(mesh, b);
  r.dim_span_B = stable_rank(R);
  r.dim_ker_repr = b.node_member_count - r.dim_span_B;

  const SparseMatrix S = stiffness_matrix_B(mesh);
  Eigen::MatrixXd Sd = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(S.rows()),
                                             static_cast<Eigen::Index>(S.cols()));
  for (index_t rr = 0; rr < S.rows(); ++rr)
    for (index_t p = S.row_ptr[static_cast<std::size_t>(rr)];
         p < S.row_ptr[static_cast<std::size_t>(rr) + 1]; ++p)
      Sd(static_cast<Eigen::Index>(rr), static_cast<Eigen::Index>(S.col[static_cast<std::size_t>(p)])) =
          S.val[static_cast<std::size_t>(p)];
  r.dim_ker_stiffness = S.rows() - stable_rank(Sd);
  return r;
}

SparseMatrix stiffness_matrix_B(const PeriodicMesh& mesh) {
  const BasisCatalog cat = build_catalog(mesh, BasisKind::B);
  const double h = mesh.h();
  const LocalMatrix loc = local_stiffness(h, mesh.dim());
  const index_t nb = cat.node_member_count;
  const int corners = 1 << mesh.dim();
  const auto& n = mesh.spec.counts;

  std::vector<std::vector<std::pair<index_t, double>>> rows(static_cast<std::size_t>(nb));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t m = 0; m < nb; ++m) {
    const index_t z = cat.members[static_cast<std::size_t>(m)].node;
    const auto ijk = mesh.node_coords(z);
    auto& out = rows[static_cast<std::size_t>(m)];
    for (int cr = 0; cr < corners; ++cr) {
      index_t ci = ijk[0] - (cr & 1);
      index_t cj = ijk[1] - ((cr >> 1) & 1);
      index_t ck = ijk[2] - ((cr >> 2) & 1);
      if (mesh.periodic()) {
        ci = (ci % n[0] + n[0]) % n[0];
        cj = (cj % n[1] + n[1]) % n[1];
        if (mesh.dim() == 3) ck = (ck % n[2] + n[2]) % n[2];
      } else {
        if (ci < 0 || ci >= n[0] || cj < 0 || cj >= n[1]) continue;
        if (mesh.dim() == 3 && (ck < 0 || ck >= n[2])) continue;
      }
      const index_t cell = mesh.cell_id(ci, cj, mesh.dim() == 3 ? ck : 0);
      const auto cnodes = mesh.cell_nodes(cell);
      for (int c2 = 0; c2 < corners; ++c2) {
        const index_t neighbor = cat.node_to_member[static_cast<std::size_t>(cnodes[static_cast<std::size_t>(c2)])];
        if (neighbor < 0) continue;
        out.emplace_back(neighbor, loc(cr, c2));
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<index_t, double>> merged;
    for (const auto& e : out) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    out = std::move(merged);
  }

  SparseMatrix S(nb, nb);
  S.symmetric_hint = true;
  index_t nnz = 0;
  for (index_t m = 0; m < nb; ++m) {
    nnz += static_cast<index_t>(rows[static_cast<std::size_t>(m)].size());
    S.row_ptr[static_cast<std::size_t>(m) + 1] = nnz;
  }
  S.col.resize(static_cast<std::size_t>(nnz));
  S.val.resize(static_cast<std::size_t>(nnz));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (index_t m = 0; m < nb; ++m) {
    index_t p = S.row_ptr[static_cast<std::size_t>(m)];
    for (const auto& e : rows[static_cast<std::size_t>(m)]) {
      S.col[static_cast<std::size_t>(p)] = e.first;
      S.val[static_cast<std::size_t>(p)] = e.second;
      ++p;
    }
  }
  return S;
}

namespace {

// Per-cell products of two face-value tables: energy uses the gradient dot,
// mass integrates the product with a Gauss rule (exact for bilinears).
void pairwise_cell_products(const PeriodicMesh& mesh,
                            const std::vector<std::vector<double>>& fv,
                            Eigen::MatrixXd& energy, Eigen::MatrixXd& mass) {
  const int na = static_cast<int>(fv.size());
  const double h = mesh.h();
  const int dim = mesh.dim();
  const double vol = std::pow(h, dim);
  const QuadratureRule rule = gauss_rule(3, dim);
  energy = Eigen::MatrixXd::Zero(na, na);
  mass = Eigen::MatrixXd::Zero(na, na);
  const index_t ncell = mesh.cell_count();
  std::vector<double> cell_e(static_cast<std::size_t>(ncell));
  std::vector<double> cell_m(static_cast<std::size_t>(ncell));
  for (int i = 0; i < na; ++i)
    for (int j = i; j < na; ++j) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (index_t c = 0; c < ncell; ++c) {
        const auto cf = mesh.cell_faces(c);
        std::array<double, 6> vi{}, vj{};
        for (int f = 0; f < 2 * dim; ++f) {
          vi[static_cast<std::size_t>(f)] = fv[static_cast<std::size_t>(i)][static_cast<std::size_t>(cf[static_cast<std::size_t>(f)])];
          vj[static_cast<std::size_t>(f)] = fv[static_cast<std::size_t>(j)][static_cast<std::size_t>(cf[static_cast<std::size_t>(f)])];
        }
        const CellLinear pi = cell_linear_from_face_values(std::span<const double>(vi.data(), static_cast<std::size_t>(2 * dim)), h, dim);
        const CellLinear pj = cell_linear_from_face_values(std::span<const double>(vj.data(), static_cast<std::size_t>(2 * dim)), h, dim);
        double g = 0.0;
        for (int t = 0; t < dim; ++t)
          g += pi.b[static_cast<std::size_t>(t)] * pj.b[static_cast<std::size_t>(t)];
        cell_e[static_cast<std::size_t>(c)] = g * vol;
        double mq = 0.0;
        for (int q = 0; q < rule.point_count(); ++q) {
          Point x = rule.point(q);
          for (int t = 0; t < dim; ++t) x[static_cast<std::size_t>(t)] *= h;
          mq += rule.weight(q) * pi.value(x) * pj.value(x);
        }
        cell_m[static_cast<std::size_t>(c)] = mq * vol;
      }
      energy(i, j) = energy(j, i) = kernels::sum(cell_e);
      mass(i, j) = mass(j, i) = kernels::sum(cell_m);
    }
}

std::vector<std::vector<double>> alternating_value_tables(
    const PeriodicMesh& mesh, const BasisCatalog& catalog) {
  std::vector<std::vector<double>> fv;
  for (index_t m = catalog.node_member_count; m < catalog.size(); ++m)
    fv.push_back(member_face_values(mesh, catalog.members[static_cast<std::size_t>(m)]));
  return fv;
}

}  // namespace

Eigen::MatrixXd stiffness_matrix_A(const PeriodicMesh& mesh,
                                   const BasisCatalog& catalog) {
  Eigen::MatrixXd e, m;
  pairwise_cell_products(mesh, alternating_value_tables(mesh, catalog), e, m);
  return e;
}

Eigen::MatrixXd mass_matrix_A(const PeriodicMesh& mesh,
                              const BasisCatalog& catalog) {
  Eigen::MatrixXd e, m;
  pairwise_cell_products(mesh, alternating_value_tables(mesh, catalog), e, m);
  return m;
}

}  // namespace p1nc
