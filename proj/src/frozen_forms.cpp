#include "nlt/frozen_forms.hpp"

#include <cmath>

#include "nlt/parallel.hpp"

namespace nlt {

namespace {
// Wrapped displacement of a difference index.
Point diff_point(const TorusGrid& g, std::int64_t df) {
  const Index3 j = g.unflat(df);
  Point d = Point::Zero();
  for (int a = 0; a < g.n; ++a) d[a] = wrap_unit(static_cast<double>(j[a]) * g.spacing());
  return d;
}

// Row-major difference index on an N^n lattice: flat(jx - jy mod N).
std::int64_t lattice_diff(std::int64_t lx, std::int64_t ly, int n, int N) {
  std::int64_t df = 0;
  std::int64_t sx = 1;
  for (int a = 1; a < n; ++a) sx *= N;
  for (int a = 0; a < n; ++a) {
    std::int64_t dd = ((lx / sx) % N - (ly / sx) % N) % N;
    if (dd < 0) dd += N;
    df = df * N + dd;
    sx /= N;
  }
  return df;
}
} // namespace

double kernel_form(const Kernel& K, const GridFunction& u, const GridFunction& phi) {
  require(u.grid == phi.grid, "kernel_form: grid mismatch");
  const TorusGrid& g = u.grid;
  const std::int64_t m = g.size();
  const double expo = g.n + 2 * K.s;
  const double h2n = std::pow(g.spacing(), 2 * g.n);
  std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t gx) {
    const Point x = g.point(static_cast<std::int64_t>(gx));
    double local = 0;
    for (std::int64_t gy = 0; gy < m; ++gy) {
      if (static_cast<std::int64_t>(gx) == gy) continue;
      Index3 dj = g.unflat(gy);
      const Index3 jx = g.unflat(static_cast<std::int64_t>(gx));
      for (int a = 0; a < g.n; ++a) dj[a] -= jx[a];
      const Point e = diff_point(g, g.flat(dj)); // y - x, wrapped
      const double r = e.norm();
      local += K.eval(x, r, e / r) * std::pow(r, -expo) *
               (u.values[gx] - u.values[gy]) * (phi.values[gx] - phi.values[gy]);
    }
    acc[gx] = local;
  });
  double total = 0;
  for (double v : acc) total += v;
  return total * h2n;
}

GridFunction kernel_form_density(const Kernel& K, const GridFunction& u) {
  const TorusGrid& g = u.grid;
  const std::int64_t m = g.size();
  const double expo = g.n + 2 * K.s;
  const double hn = std::pow(g.spacing(), g.n);
  GridFunction out(g);
  std::vector<double> dens(static_cast<std::size_t>(m), 0.0);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t gx) {
    const Point x = g.point(static_cast<std::int64_t>(gx));
    double local = 0;
    for (std::int64_t gy = 0; gy < m; ++gy) {
      if (static_cast<std::int64_t>(gx) == gy) continue;
      Index3 dj = g.unflat(gy);
      const Index3 jx = g.unflat(static_cast<std::int64_t>(gx));
      for (int a = 0; a < g.n; ++a) dj[a] -= jx[a];
      const Point e = diff_point(g, g.flat(dj)); // y - x, wrapped
      const double r = e.norm();
      const Point y = g.point(gy);
      const double w = std::pow(r, -expo);
      // B(u, phi) = sum_x phi(x) * density(x) h^n: both orientations of the
      // pair land on phi(x).
      local += w * (u.values[gx] - u.values[gy]) *
               (K.eval(x, r, e / r) + K.eval(y, r, -e / r));
    }
    dens[gx] = local * hn;
  });
  for (std::int64_t f = 0; f < m; ++f) out.values[f] = dens[f];
  return out;
}

std::int64_t FrozenForms::diff_index(std::int64_t gx, std::int64_t gy) const {
  Index3 dj = loc_.grid.unflat(gx);
  const Index3 jy = loc_.grid.unflat(gy);
  for (int a = 0; a < loc_.grid.n; ++a) dj[a] -= jy[a];
  return loc_.grid.flat(dj);
}

double FrozenForms::K_at(std::int64_t gx, std::int64_t gy, std::int64_t df) const {
  if (!Kxy_.empty()) return Kxy_[gx * m_ + gy];
  // df indexes x - y; the kernel sees the partner direction (y - x)/r.
  const Point d = diff_point(loc_.grid, df);
  const double r = d.norm();
  return K_.eval(loc_.grid.point(gx), r, -d / r);
}

FrozenForms::FrozenForms(const Kernel& K, const LocalizationSpec& loc, int lattice_window)
    : K_(K), loc_(loc), s_(K.s) {
  const TorusGrid& g = loc_.grid;
  m_ = g.size();
  hn_ = std::pow(g.spacing(), g.n);
  h2n_ = hn_ * hn_;
  const int M = std::max(1, static_cast<int>(std::ceil(lattice_window / loc_.L)));
  mu_ = periodize(K, loc_.x0, s_, M, loc_.L);

  const double expo = g.n + 2 * s_;
  wdiff_.assign(m_, 0.0);
  distdiff_.assign(m_, 0.0);
  K0diff_.assign(m_, 0.0);
  for (std::int64_t df = 1; df < m_; ++df) {
    const Point d = diff_point(g, df); // x - y for pairs indexed by df
    const double r = d.norm();
    distdiff_[df] = r;
    wdiff_[df] = std::pow(r, -expo);
    K0diff_[df] = K_.eval(loc_.x0, 0.0, -d / r); // partner direction
  }

  const std::int64_t msub = loc_.subgrid().size();
  mudiff_.assign(msub, 0.0);
  // Subgrid difference (local row-major index) maps to a physical offset.
  std::vector<double> mubuf(static_cast<std::size_t>(msub), 0.0);
  parallel_for(static_cast<std::size_t>(msub), [&](std::size_t df) {
    if (df == 0) return;
    Index3 lj{0, 0, 0};
    std::int64_t rem = static_cast<std::int64_t>(df);
    for (int a = g.n - 1; a >= 0; --a) {
      lj[a] = rem % loc_.N_sub;
      rem /= loc_.N_sub;
    }
    // df indexes x - y in local coordinates; mu is evaluated at y - x so
    // that its central lattice term carries the partner direction.
    Point d = Point::Zero();
    for (int a = 0; a < g.n; ++a) d[a] = -static_cast<double>(lj[a]) * g.spacing();
    mubuf[df] = mu_(d);
  });
  for (std::int64_t i = 0; i < msub; ++i) mudiff_[i] = mubuf[i];

  if (m_ * m_ <= (std::int64_t{1} << 24)) {
    Kxy_.assign(m_ * m_, 0.0);
    parallel_for(static_cast<std::size_t>(m_), [&](std::size_t gx) {
      const Point x = g.point(static_cast<std::int64_t>(gx));
      for (std::int64_t gy = 0; gy < m_; ++gy) {
        if (static_cast<std::int64_t>(gx) == gy) continue;
        const std::int64_t df = diff_index(static_cast<std::int64_t>(gx), gy);
        const Point d = diff_point(g, df);
        Kxy_[gx * m_ + gy] = K_.eval(x, d.norm(), -d / d.norm());
      }
    });
  }

  // Measured oscillation over the form ball: sup |E_K| on pairs in B(10R)^2.
  double osc = 0;
  for (std::int64_t gx = 0; gx < m_; ++gx) {
    if (!loc_.in_form[gx]) continue;
    for (std::int64_t gy = 0; gy < m_; ++gy) {
      if (gx == gy || !loc_.in_form[gy]) continue;
      const std::int64_t df = diff_index(gx, gy);
      osc = std::max(osc, std::abs(K0diff_[df] - K_at(gx, gy, df)));
    }
  }
  oscillation_ = osc;
}

double FrozenForms::deviation(std::int64_t gx, std::int64_t gy) const {
  const std::int64_t df = diff_index(gx, gy);
  return K0diff_[df] - K_at(gx, gy, df);
}

double FrozenForms::cell_mean(const Array& psi) const { return psi.mean(); }

double FrozenForms::psi_tilde(const Array& psi, double c, std::int64_t gf) const {
  const double tilde = loc_.eta_tilde.values[gf];
  if (tilde == 0.0) return 0.0;
  return tilde * (psi[loc_.wrap_to_cell(gf)] - c);
}

double FrozenForms::B_mu(const Array& v, const Array& psi) const {
  const std::int64_t msub = loc_.subgrid().size();
  require(v.size() == msub && psi.size() == msub, "B_mu: subgrid fields expected");
  double acc = 0;
  for (std::int64_t lx = 0; lx < msub; ++lx) {
    for (std::int64_t ly = 0; ly < msub; ++ly) {
      if (lx == ly) continue;
      const std::int64_t df = lattice_diff(lx, ly, loc_.grid.n, loc_.N_sub);
      acc += mudiff_[df] * (v[lx] - v[ly]) * (psi[lx] - psi[ly]);
    }
  }
  return acc * h2n_;
}

double FrozenForms::H(const Array& v, const Array& psi) const {
  double acc = 0;
  for (std::int64_t gx = 0; gx < m_; ++gx) {
    if (!loc_.in_form[gx]) continue;
    const std::int64_t lx = loc_.sub_index[gx];
    for (std::int64_t gy = 0; gy < m_; ++gy) {
      if (gx == gy || !loc_.in_form[gy]) continue;
      const std::int64_t ly = loc_.sub_index[gy];
      const std::int64_t df = diff_index(gx, gy);
      const double EK = K0diff_[df] - K_at(gx, gy, df);
      acc += EK * wdiff_[df] * (v[lx] - v[ly]) * (psi[lx] - psi[ly]);
    }
  }
  return acc * h2n_;
}

double FrozenForms::G_piece(int i, const GridFunction& u, const Array& psi) const {
  const double c = cell_mean(psi);
  const std::vector<char>& cell = loc_.in_cell;
  double acc = 0;

  switch (i) {
    case 1: { // image leftover of mu over the cell
      const std::int64_t msub = loc_.subgrid().size();
      for (std::int64_t lx = 0; lx < msub; ++lx) {
        const std::int64_t gx = loc_.cell_points[lx];
        const double vx = loc_.eta.values[gx] * u.values[gx];
        for (std::int64_t ly = 0; ly < msub; ++ly) {
          if (lx == ly) continue;
          const std::int64_t gy = loc_.cell_points[ly];
          const std::int64_t df = diff_index(gx, gy);
          const std::int64_t lf = lattice_diff(lx, ly, loc_.grid.n, loc_.N_sub);
          const double vy = loc_.eta.values[gy] * u.values[gy];
          const double leftover = mudiff_[lf] - K0diff_[df] * wdiff_[df];
          acc += leftover * (vx - vy) * (psi[lx] - psi[ly]);
        }
      }
      return acc * h2n_;
    }
    case 2:   // minus the K-form over B(10R) x (Omega \ cell)
    case 3: { // minus the K-form over (Omega \ cell) x B(10R)
      for (std::int64_t gx = 0; gx < m_; ++gx) {
        const bool x_in_ball = loc_.in_form[gx];
        for (std::int64_t gy = 0; gy < m_; ++gy) {
          if (gx == gy) continue;
          const bool pick = (i == 2) ? (x_in_ball && !cell[gy])
                                     : (!cell[gx] && loc_.in_form[gy]);
          if (!pick) continue;
          const std::int64_t df = diff_index(gx, gy);
          const double vx = loc_.eta.values[gx] * u.values[gx];
          const double vy = loc_.eta.values[gy] * u.values[gy];
          acc -= K_at(gx, gy, df) * wdiff_[df] * (vx - vy) *
                 (psi_tilde(psi, c, gx) - psi_tilde(psi, c, gy));
        }
      }
      return acc * h2n_;
    }
    case 4: { // deviation form between the support ball and the cell far zone
      for (std::int64_t gx = 0; gx < m_; ++gx) {
        for (std::int64_t gy = 0; gy < m_; ++gy) {
          if (gx == gy) continue;
          const bool first = loc_.in_support[gx] && cell[gy] && !loc_.in_form[gy];
          const bool second = cell[gx] && !loc_.in_form[gx] && loc_.in_support[gy];
          if (!first && !second) continue;
          const std::int64_t df = diff_index(gx, gy);
          const double EK = K0diff_[df] - K_at(gx, gy, df);
          const double vx = loc_.eta.values[gx] * u.values[gx];
          const double vy = loc_.eta.values[gy] * u.values[gy];
          const std::int64_t lx = loc_.sub_index[gx];
          const std::int64_t ly = loc_.sub_index[gy];
          acc += EK * wdiff_[df] * (vx - vy) * ((psi[lx] - c) - (psi[ly] - c));
        }
      }
      return acc * h2n_;
    }
    case 5: { // cutoff commutator over the whole torus
      for (std::int64_t gx = 0; gx < m_; ++gx) {
        const double ex = loc_.eta.values[gx];
        for (std::int64_t gy = 0; gy < m_; ++gy) {
          if (gx == gy) continue;
          const double ey = loc_.eta.values[gy];
          if (ex == 0.0 && ey == 0.0) continue;
          const std::int64_t df = diff_index(gx, gy);
          acc += K_at(gx, gy, df) * wdiff_[df] * (ex - ey) *
                 (u.values[gy] * psi_tilde(psi, c, gx) -
                  u.values[gx] * psi_tilde(psi, c, gy));
        }
      }
      return acc * h2n_;
    }
    default:
      throw InvalidArgument("G_piece: index must be 1..5");
  }
}

double FrozenForms::G(const GridFunction& u, const Array& psi) const {
  double acc = 0;
  for (int i = 1; i <= 5; ++i) acc += G_piece(i, u, psi);
  return acc;
}

double FrozenForms::g_eta(const GridFunction& g, const Array& psi) const {
  const double c = cell_mean(psi);
  double acc = 0;
  for (std::int64_t gf = 0; gf < m_; ++gf) {
    const double e = loc_.eta.values[gf];
    if (e == 0.0) continue;
    acc += g.values[gf] * e * psi_tilde(psi, c, gf);
  }
  return acc * hn_;
}

Array FrozenForms::restrict_to_cell(const GridFunction& u) const {
  const std::int64_t msub = loc_.subgrid().size();
  Array out(msub);
  for (std::int64_t l = 0; l < msub; ++l) out[l] = u.values[loc_.cell_points[l]];
  return out;
}

Array FrozenForms::cutoff_field(const GridFunction& u) const {
  const std::int64_t msub = loc_.subgrid().size();
  Array out(msub);
  for (std::int64_t l = 0; l < msub; ++l) {
    const std::int64_t gf = loc_.cell_points[l];
    out[l] = loc_.eta.values[gf] * u.values[gf];
  }
  return out;
}

Array FrozenForms::H_density(const Array& v) const {
  const std::int64_t msub = loc_.subgrid().size();
  Array D = Array::Zero(msub);
  std::vector<double> buf(static_cast<std::size_t>(m_), 0.0);
  parallel_for(static_cast<std::size_t>(m_), [&](std::size_t gxs) {
    const std::int64_t gx = static_cast<std::int64_t>(gxs);
    if (!loc_.in_form[gx]) return;
    const std::int64_t lx = loc_.sub_index[gx];
    double local = 0;
    for (std::int64_t gy = 0; gy < m_; ++gy) {
      if (gx == gy || !loc_.in_form[gy]) continue;
      const std::int64_t ly = loc_.sub_index[gy];
      const std::int64_t df = diff_index(gx, gy);
      const std::int64_t dfr = diff_index(gy, gx);
      const double EKxy = K0diff_[df] - K_at(gx, gy, df);
      const double EKyx = K0diff_[dfr] - K_at(gy, gx, dfr);
      local += wdiff_[df] * (v[lx] - v[ly]) * (EKxy + EKyx);
    }
    buf[gxs] = local;
  });
  for (std::int64_t gx = 0; gx < m_; ++gx)
    if (loc_.in_form[gx]) D[loc_.sub_index[gx]] = buf[gx] * hn_;
  return D;
}

Array FrozenForms::g_eta_density(const GridFunction& g) const {
  const std::int64_t msub = loc_.subgrid().size();
  Array D = Array::Zero(msub);
  for (std::int64_t l = 0; l < msub; ++l) {
    const std::int64_t gf = loc_.cell_points[l];
    D[l] = g.values[gf] * loc_.eta.values[gf];
  }
  return D;
}

Array FrozenForms::G_density(const GridFunction& u) const {
  // Assemble by pairing each G_i against delta functions through the same
  // index sets as the direct evaluations; psi-linear coefficients land on the
  // subgrid slot of the (possibly wrapped) argument, the mean part is
  // irrelevant for mean-zero solves and dropped.
  const std::int64_t msub = loc_.subgrid().size();
  Array D = Array::Zero(msub);
  const std::vector<char>& cell = loc_.in_cell;

  // G1.
  for (std::int64_t lx = 0; lx < msub; ++lx) {
    const std::int64_t gx = loc_.cell_points[lx];
    const double vx = loc_.eta.values[gx] * u.values[gx];
    double local = 0;
    for (std::int64_t ly = 0; ly < msub; ++ly) {
      if (lx == ly) continue;
      const std::int64_t gy = loc_.cell_points[ly];
      const std::int64_t df = diff_index(gx, gy);
      const std::int64_t dfr = diff_index(gy, gx);
      const std::int64_t lf = lattice_diff(lx, ly, loc_.grid.n, loc_.N_sub);
      const std::int64_t lfr = lattice_diff(ly, lx, loc_.grid.n, loc_.N_sub);
      const double vy = loc_.eta.values[gy] * u.values[gy];
      const double Wxy = mudiff_[lf] - K0diff_[df] * wdiff_[df];
      const double Wyx = mudiff_[lfr] - K0diff_[dfr] * wdiff_[dfr];
      local += (vx - vy) * (Wxy + Wyx);
    }
    D[lx] += local * hn_;
  }

  // G2 + G3 (sign folded in) and G4: loops over mixed domains.
  for (std::int64_t gx = 0; gx < m_; ++gx) {
    for (std::int64_t gy = 0; gy < m_; ++gy) {
      if (gx == gy) continue;
      const bool g2 = loc_.in_form[gx] && !cell[gy];
      const bool g3 = !cell[gx] && loc_.in_form[gy];
      const bool g4 = (loc_.in_support[gx] && cell[gy] && !loc_.in_form[gy]) ||
                      (cell[gx] && !loc_.in_form[gx] && loc_.in_support[gy]);
      if (!g2 && !g3 && !g4) continue;
      const std::int64_t df = diff_index(gx, gy);
      const double vx = loc_.eta.values[gx] * u.values[gx];
      const double vy = loc_.eta.values[gy] * u.values[gy];
      double coeff = 0;
      if (g2 || g3) coeff = -K_at(gx, gy, df) * wdiff_[df] * (vx - vy);
      if (g4) coeff = (K0diff_[df] - K_at(gx, gy, df)) * wdiff_[df] * (vx - vy);
      // The functional acts as coeff * (psi~(x) - psi~(y)).
      const double tx = loc_.eta_tilde.values[gx];
      if (tx != 0.0) D[loc_.wrap_to_cell(gx)] += coeff * tx * hn_;
      const double ty = loc_.eta_tilde.values[gy];
      if (ty != 0.0) D[loc_.wrap_to_cell(gy)] -= coeff * ty * hn_;
    }
  }

  // G5.
  for (std::int64_t gx = 0; gx < m_; ++gx) {
    const double ex = loc_.eta.values[gx];
    for (std::int64_t gy = 0; gy < m_; ++gy) {
      if (gx == gy) continue;
      const double ey = loc_.eta.values[gy];
      if (ex == 0.0 && ey == 0.0) continue;
      const std::int64_t df = diff_index(gx, gy);
      const double base = K_at(gx, gy, df) * wdiff_[df] * (ex - ey);
      const double tx = loc_.eta_tilde.values[gx];
      if (tx != 0.0) D[loc_.wrap_to_cell(gx)] += base * u.values[gy] * tx * hn_;
      const double ty = loc_.eta_tilde.values[gy];
      if (ty != 0.0) D[loc_.wrap_to_cell(gy)] -= base * u.values[gx] * ty * hn_;
    }
  }

  return D;
}

} // namespace nlt
