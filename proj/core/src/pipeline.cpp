#include "amrt/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "amrt/errors.hpp"

namespace amrt {

void ReconstructionReport::set(const std::string& key, double value) {
  for (auto& [k, v] : diagnostics)
    if (k == key) {
      v = value;
      return;
    }
  diagnostics.emplace_back(key, value);
}

double ReconstructionReport::get(const std::string& key) const {
  for (const auto& [k, v] : diagnostics)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

class StageClock {
 public:
  explicit StageClock(ReconstructionReport& r) : report_(r) {}

  template <class Fn>
  auto run(const std::string& stage, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record(stage, t0);
      } else {
        auto out = fn();
        record(stage, t0);
        return out;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.stage_seconds.emplace_back(stage, s);
  }
  ReconstructionReport& report_;
};

FieldPair to_fields(const ComplexComponents& cc, const DomainGrid& grid) {
  FieldPair fp = fields_from_components(cc);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!grid.inside(i))
      for (RealGrid* a : fp.arrays()) (*a)[i] = 0.0;
  return fp;
}

double max_imag(const ComplexGrid& g, const DomainGrid& grid) {
  double m = 0.0;
  for (std::size_t i : grid.inside_nodes()) m = std::max(m, std::abs(g[i].imag()));
  return m;
}

void finish(Reconstruction& rec, const CascadeResult& c, const LowModes& lm, const DomainGrid& grid,
            const ReconstructionOptions& opts, const RealGrid* a, StageClock& clock) {
  rec.v0 = prepend(lm.v0_0, lm.v0_m1, c.L2w0);
  rec.v1 = prepend(lm.v1_0, c.Lw1);
  rec.v2 = c.w2;
  rec.components = clock.run("components", [&] { return recover_components(rec.v0, grid, a); });
  rec.fields = to_fields(rec.components, grid);
  auto& rep = rec.report;
  rep.set("imag.v0_0", max_imag(lm.v0_0, grid));
  rep.set("imag.v1_0", max_imag(lm.v1_0, grid));
  const auto res = level_residuals(rec, grid, opts.residual_margin, a);
  rep.set("residual.level0", res[0]);
  rep.set("residual.level1", res[1]);
  rep.set("residual.level2", res[2]);
}

std::array<SeqField, 3> boundary_coefficients(const MomentSinogram& ms, const ReconstructionOptions& opts,
                                              ReconstructionReport& rep, StageClock& clock) {
  const BoundaryTrace bt = clock.run("traces", [&] { return traces_from_moments(ms); });
  auto g = clock.run("angular_coeffs", [&] { return angular_coeffs(bt, opts.N); });
  for (int k = 0; k < 3; ++k) {
    const double tail = tail_magnitude(g[k]);
    rep.set("tail.g" + std::to_string(k), tail);
    if (tail > opts.tail_tol)
      rep.warnings.push_back("angular tail of g" + std::to_string(k) + " exceeds tail_tol");
  }
  return g;
}

}  // namespace

Reconstruction reconstruct_nonattenuated(const MomentSinogram& ms, const DomainGrid& grid,
                                         const ReconstructionOptions& opts) {
  Reconstruction rec;
  rec.report.mode = "non-attenuated";
  StageClock clock(rec.report);
  const auto g = boundary_coefficients(ms, opts, rec.report, clock);
  const CascadeResult c = clock.run("cascade", [&] { return cascade(g, grid, opts.cauchy); });
  const LowModes lm = clock.run("low_modes", [&] { return recover_low_modes(c.Lw1, c.w2, grid); });
  finish(rec, c, lm, grid, opts, nullptr, clock);
  return rec;
}

Reconstruction reconstruct_attenuated(const MomentSinogram& ms, const Attenuation& att, const DomainGrid& grid,
                                      const ReconstructionOptions& opts) {
  Reconstruction rec;
  rec.report.mode = "attenuated";
  StageClock clock(rec.report);
  const auto g = boundary_coefficients(ms, opts, rec.report, clock);

  std::vector<Vec2> bpoints(ms.layout.n_boundary);
  for (int i = 0; i < ms.layout.n_boundary; ++i) bpoints[i] = ms.layout.point(i);
  const IntegratingFactor fb = clock.run(
      "factor_boundary", [&] { return integrating_factor(att, grid.domain(), bpoints, opts.N, opts.factor); });
  const IntegratingFactor fg =
      clock.run("factor_grid", [&] { return integrating_factor(att, grid, opts.N, opts.factor); });
  auto& rep = rec.report;
  rep.set("factor.negative_defect", std::max(fb.negative_defect, fg.negative_defect));
  rep.set("factor.convolution_defect", std::max(fb.convolution_defect, fg.convolution_defect));
  rep.set("factor.product_defect", std::max(fb.product_defect, fg.product_defect));
  if (!fb.spectrum_ok(opts.factor.spec_tol) || !fg.spectrum_ok(opts.factor.spec_tol))
    rep.warnings.push_back("integrating factor: negative-index defect exceeds spec_tol");

  const std::array<SeqField, 3> gw = clock.run("convert_boundary", [&] {
    return std::array<SeqField, 3>{apply_expG(g[0], fb, GaugeSign::minus), apply_expG(g[1], fb, GaugeSign::minus),
                                   apply_expG(g[2], fb, GaugeSign::minus)};
  });
  const CascadeResult cw = clock.run("cascade", [&] { return cascade(gw, grid, opts.cauchy); });
  const CascadeResult cv = clock.run("convert_back", [&] {
    return CascadeResult{apply_expG(cw.L2w0, fg, GaugeSign::plus), apply_expG(cw.Lw1, fg, GaugeSign::plus),
                         apply_expG(cw.w2, fg, GaugeSign::plus)};
  });
  const RealGrid a = att.sample(grid);
  const LowModes lm = clock.run("low_modes", [&] { return recover_low_modes(cv.Lw1, cv.w2, grid, &a); });
  finish(rec, cv, lm, grid, opts, &a, clock);
  return rec;
}

std::pair<double, double> field_norms(const FieldPair& fp, const DomainGrid& grid) {
  double nf = 0.0, nF = 0.0;
  for (std::size_t i : grid.inside_nodes()) {
    const double w = grid.area_weight(i);
    nf += w * (fp.f1[i] * fp.f1[i] + fp.f2[i] * fp.f2[i]);
    nF += w * (fp.F11[i] * fp.F11[i] + 2.0 * fp.F12[i] * fp.F12[i] + fp.F22[i] * fp.F22[i]);
  }
  return {std::sqrt(nf), std::sqrt(nF)};
}

std::pair<double, double> relative_errors(const FieldPair& recon, const FieldPair& truth, const DomainGrid& grid,
                                          double radius) {
  double ef = 0.0, eF = 0.0, tf = 0.0, tF = 0.0;
  for (std::size_t i : grid.inside_nodes()) {
    if (grid.node(i).norm() > radius) continue;
    const double d1 = recon.f1[i] - truth.f1[i], d2 = recon.f2[i] - truth.f2[i];
    const double d11 = recon.F11[i] - truth.F11[i], d12 = recon.F12[i] - truth.F12[i],
                 d22 = recon.F22[i] - truth.F22[i];
    ef += d1 * d1 + d2 * d2;
    eF += d11 * d11 + 2.0 * d12 * d12 + d22 * d22;
    tf += truth.f1[i] * truth.f1[i] + truth.f2[i] * truth.f2[i];
    tF += truth.F11[i] * truth.F11[i] + 2.0 * truth.F12[i] * truth.F12[i] + truth.F22[i] * truth.F22[i];
  }
  const double both = tf + tF;
  if (both == 0.0) return {std::sqrt(ef), std::sqrt(eF)};
  const double nf = tf > 0.0 ? tf : both;
  const double nF = tF > 0.0 ? tF : both;
  return {std::sqrt(ef / nf), std::sqrt(eF / nF)};
}

namespace {

// Sobolev-type sum of ||D^r v||^2, r <= q, for a periodic sequence with arclength steps ds_i.
double periodic_sobolev_sq(std::vector<cplx> v, const std::vector<double>& ds, int q) {
  const int n = static_cast<int>(v.size());
  double total = 0.0;
  for (int r = 0; r <= q; ++r) {
    for (int i = 0; i < n; ++i) total += std::norm(v[i]) * ds[i];
    if (r == q) break;
    std::vector<cplx> d(n);
    for (int i = 0; i < n; ++i) d[i] = (v[(i + 1) % n] - v[(i + n - 1) % n]) / (2.0 * ds[i]);
    v.swap(d);
  }
  return total;
}

}  // namespace

double weighted_seq_norm(const SeqField& coeffs, const Domain& domain, double p, int q) {
  if (q < 0 || q > 3) throw ArgumentError("weighted_seq_norm: q must lie in {0,1,2,3}");
  const int nb = static_cast<int>(coeffs.nodes());
  std::vector<double> ds(nb);
  for (int i = 0; i < nb; ++i) ds[i] = domain.boundary_tangent(kTwoPi * i / nb).norm() * kTwoPi / nb;
  double total = 0.0;
  for (int k = 0; k < coeffs.length(); ++k) {
    std::vector<cplx> v(nb);
    for (int i = 0; i < nb; ++i) v[i] = coeffs.at(i, k);
    total += std::pow(1.0 + k, 2.0 * p) * periodic_sobolev_sq(std::move(v), ds, q);
  }
  return std::sqrt(total);
}

double weighted_seq_norm(const SeqField& coeffs, const DomainGrid& grid, double p, int q) {
  if (q < 0 || q > 3) throw ArgumentError("weighted_seq_norm: q must lie in {0,1,2,3}");
  if (coeffs.nodes() != grid.size()) throw ArgumentError("weighted_seq_norm: size mismatch");
  const cplx I{0.0, 1.0};
  double total = 0.0;
  for (int k = 0; k < coeffs.length(); ++k) {
    std::vector<ComplexGrid> level{coeffs.entry(k)};
    double sk = 0.0;
    for (int r = 0; r <= q; ++r) {
      for (const auto& g : level)
        for (std::size_t i : grid.inside_nodes()) sk += std::norm(g[i]) * grid.area_weight(i);
      if (r == q) break;
      std::vector<ComplexGrid> next;
      for (const auto& g : level) {
        const CRDerivatives cr = cr_derivatives(g, grid);
        ComplexGrid dx(g.size()), dy(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          dx[i] = cr.dbar[i] + cr.d[i];
          dy[i] = (cr.dbar[i] - cr.d[i]) / I;
        }
        next.push_back(std::move(dx));
        next.push_back(std::move(dy));
      }
      level.swap(next);
    }
    total += std::pow(1.0 + k, 2.0 * p) * sk;
  }
  return std::sqrt(total);
}

StabilityRatio stability_ratio(const FieldPair& fp, const MomentSinogram& ms, const DomainGrid& grid, int N) {
  StabilityRatio s;
  const auto [nf, nF] = field_norms(fp, grid);
  s.lhs = nf + nF;
  for (int k = 0; k < 3; ++k) {
    if (ms.layers[k].size() != ms.layout.size()) throw ArgumentError("stability_ratio: missing layer");
    s.rhs += weighted_seq_norm(angular_coeffs(ms.layers[k], ms.layout, N), ms.layout.domain, 3.5, k);
  }
  if (s.lhs == 0.0)
    s.ratio = 0.0;
  else if (s.rhs == 0.0)
    s.ratio = std::numeric_limits<double>::infinity();
  else
    s.ratio = s.lhs / s.rhs;
  return s;
}

std::array<double, 3> level_residuals(const Reconstruction& r, const DomainGrid& grid, double margin,
                                      const RealGrid* a) {
  SeqField LF(grid.size(), 1);
  LF.set_entry(0, r.components.c1);
  LF.set_entry(1, r.components.c2);
  const SeqField Lv0 = left_shift(r.v0, 1);
  const SeqField Lv1 = left_shift(r.v1, 1);
  return {beltrami_residual(r.v0, &LF, grid, margin, a), beltrami_residual(r.v1, &Lv0, grid, margin, a),
          beltrami_residual(r.v2, &Lv1, grid, margin, a)};
}

}  // namespace amrt
