#include <cmath>

#include "graphlogm/fit.hpp"
#include "fit_internal.hpp"

namespace graphlogm {

GraphGradient graph_gradient(const GraphScheme& s, cplx x) {
  s.validate();
  const auto k = static_cast<std::size_t>(s.k);
  std::vector<cplx> p{1.0, x}, l(k), r(k);
  auto combine = [&](const std::vector<double>& c) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * p[i];
    return acc;
  };
  for (std::size_t j = 0; j < k; ++j) {
    l[j] = combine(s.h[j]);
    r[j] = combine(s.g[j]);
    p.push_back(l[j] * r[j]);
  }
  GraphGradient out;
  out.value = combine(s.y);
  out.y.assign(p.begin(), p.end());
  out.h.resize(k);
  out.g.resize(k);
  std::vector<cplx> adj(s.y.begin(), s.y.end());
  for (std::size_t j = k; j-- > 0;) {
    const cplx a = adj[j + 2];
    const cplx al = a * r[j], ar = a * l[j];
    out.h[j].resize(j + 2);
    out.g[j].resize(j + 2);
    for (std::size_t i = 0; i < j + 2; ++i) {
      out.h[j][i] = al * p[i];
      out.g[j][i] = ar * p[i];
      adj[i] += s.h[j][i] * al + s.g[j][i] * ar;
    }
  }
  return out;
}

ParamLayout ParamLayout::restricted(int k) {
  std::vector<Slot> slots;
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i < j + 2; ++i) slots.push_back({Block::H, j, i});
    for (int i = 1; i < j + 2; ++i) slots.push_back({Block::G, j, i});
  }
  for (int i = 2; i < k + 2; ++i) slots.push_back({Block::Y, 0, i});
  return ParamLayout(std::move(slots));
}

ParamLayout ParamLayout::gauged(int k) {
  std::vector<Slot> slots;
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i < j + 1; ++i) slots.push_back({Block::H, j, i});
    for (int i = 1; i < j + 1; ++i) slots.push_back({Block::G, j, i});
  }
  for (int i = 2; i < k + 2; ++i) slots.push_back({Block::Y, 0, i});
  return ParamLayout(std::move(slots));
}

ParamLayout ParamLayout::from_mask(const GraphScheme& mask) {
  std::vector<Slot> slots;
  for (int j = 0; j < mask.k; ++j) {
    for (int i = 0; i < j + 2; ++i)
      if (std::isnan(mask.h[j][i])) slots.push_back({Block::H, j, i});
    for (int i = 0; i < j + 2; ++i)
      if (std::isnan(mask.g[j][i])) slots.push_back({Block::G, j, i});
  }
  for (int i = 0; i < mask.k + 2; ++i)
    if (std::isnan(mask.y[i])) slots.push_back({Block::Y, 0, i});
  return ParamLayout(std::move(slots));
}

namespace {
double& at(GraphScheme& s, const ParamLayout::Slot& sl) {
  switch (sl.block) {
    case ParamLayout::Block::H: return s.h[sl.row][sl.col];
    case ParamLayout::Block::G: return s.g[sl.row][sl.col];
    default: return s.y[sl.col];
  }
}
}  // namespace

std::vector<double> ParamLayout::pack(const GraphScheme& s) const {
  std::vector<double> x;
  x.reserve(slots_.size());
  GraphScheme& m = const_cast<GraphScheme&>(s);
  for (const auto& sl : slots_) x.push_back(at(m, sl));
  return x;
}

void ParamLayout::unpack(const std::vector<double>& x, GraphScheme& s) const {
  if (x.size() != slots_.size()) throw DimensionError("ParamLayout::unpack: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) at(s, slots_[i]) = x[i];
}

std::vector<cplx> ParamLayout::select(const GraphGradient& g) const {
  std::vector<cplx> out;
  out.reserve(slots_.size());
  for (const auto& sl : slots_) {
    switch (sl.block) {
      case Block::H: out.push_back(g.h[sl.row][sl.col]); break;
      case Block::G: out.push_back(g.g[sl.row][sl.col]); break;
      default: out.push_back(g.y[sl.col]); break;
    }
  }
  return out;
}

GraphScheme restricted_skeleton(int k) {
  if (k < 1) throw ArgumentError("restricted_skeleton: k must be >= 1");
  GraphScheme s;
  s.k = k;
  for (int j = 0; j < k; ++j) {
    s.h.emplace_back(static_cast<std::size_t>(j + 2), 0.0);
    s.g.emplace_back(static_cast<std::size_t>(j + 2), 0.0);
    s.h.back().back() = 1.0;
    s.g.back().back() = 1.0;
  }
  s.y.assign(static_cast<std::size_t>(k + 2), 0.0);
  s.y[1] = 1.0;
  s.meta.degree = 1 << k;
  return s;
}

namespace detail {

void monomial_jacobian_ld(const LdGraph& gr, const ParamLayout& layout, std::size_t n, std::vector<long double>& b,
                          std::vector<std::vector<long double>>* db) {
  using Poly = std::vector<long double>;
  const std::size_t np = db ? layout.size() : 0;
  auto mul = [n](const Poly& a, const Poly& c) {
    Poly out(n + 1, 0.0L);
    for (std::size_t i = 0; i <= n; ++i) {
      if (a[i] == 0.0L) continue;
      for (std::size_t j = 0; i + j <= n; ++j) out[i + j] += a[i] * c[j];
    }
    return out;
  };
  // slot_at[block][row][col] = parameter index or -1.
  std::vector<std::vector<std::vector<long>>> slot_at(3);
  for (int j = 0; j < gr.k; ++j) {
    slot_at[0].emplace_back(static_cast<std::size_t>(j + 2), -1);
    slot_at[1].emplace_back(static_cast<std::size_t>(j + 2), -1);
  }
  slot_at[2].emplace_back(static_cast<std::size_t>(gr.k + 2), -1);
  if (db)
    for (std::size_t q = 0; q < np; ++q) {
      const auto& sl = layout.slots()[q];
      slot_at[static_cast<std::size_t>(sl.block)][static_cast<std::size_t>(sl.row)][static_cast<std::size_t>(sl.col)] =
          static_cast<long>(q);
    }
  std::vector<Poly> p(2, Poly(n + 1, 0.0L));
  p[0][0] = 1.0L;
  if (n >= 1) p[1][1] = 1.0L;
  std::vector<std::vector<Poly>> dp(np, std::vector<Poly>(2, Poly(n + 1, 0.0L)));
  auto combine = [&](const std::vector<long double>& c, const std::vector<long>& slots, Poly& val,
                     std::vector<Poly>& dval) {
    val.assign(n + 1, 0.0L);
    dval.assign(np, Poly(n + 1, 0.0L));
    for (std::size_t i = 0; i < c.size(); ++i) {
      const long double ci = c[i];
      if (ci != 0.0L) {
        for (std::size_t d = 0; d <= n; ++d) val[d] += ci * p[i][d];
        for (std::size_t q = 0; q < np; ++q)
          for (std::size_t d = 0; d <= n; ++d) dval[q][d] += ci * dp[q][i][d];
      }
      if (slots[i] >= 0)
        for (std::size_t d = 0; d <= n; ++d) dval[static_cast<std::size_t>(slots[i])][d] += p[i][d];
    }
  };
  Poly l, r;
  std::vector<Poly> dl, dr;
  for (int j = 0; j < gr.k; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    combine(gr.h[jj], slot_at[0][jj], l, dl);
    combine(gr.g[jj], slot_at[1][jj], r, dr);
    p.push_back(mul(l, r));
    for (std::size_t q = 0; q < np; ++q) {
      Poly a = mul(dl[q], r);
      const Poly c = mul(l, dr[q]);
      for (std::size_t d = 0; d <= n; ++d) a[d] += c[d];
      dp[q].push_back(std::move(a));
    }
  }
  std::vector<Poly> dz;
  combine(gr.y, slot_at[2][0], b, dz);
  if (db) *db = std::move(dz);
}

}  // namespace detail

MonomialJacobian monomial_jacobian(const GraphScheme& s, const ParamLayout& layout, std::size_t n) {
  s.validate();
  MonomialJacobian out;
  detail::monomial_jacobian_ld(detail::LdGraph(s, layout), layout, n, out.b, &out.db);
  return out;
}

double boundary_max_error(const GraphScheme& s, double radius, int n) {
  using LC = std::complex<long double>;
  long double m = 0.0L;
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < n; ++i) {
    const long double t = 2.0L * pi * i / n;
    const LC z = static_cast<long double>(radius) * LC(std::cos(t), std::sin(t));
    const LC e = scalar_graph_eval(s, z) + std::log(LC(1.0L) - z);
    m = std::max(m, std::abs(e));
  }
  return static_cast<double>(m);
}

}  // namespace graphlogm
