#include "gapstab/suite.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <set>

#include "gapstab/assembly.hpp"
#include "gapstab/lieb_robinson.hpp"
#include "gapstab/localization.hpp"

namespace gapstab {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxPhysicalModes = 12;  // gap curve on 4096 states
constexpr std::size_t kMaxLRModes = 8;         // dense evolution on 256 states

CMat random_even(Eigen::Index dim, std::mt19937_64& rng, bool hermitian = true) {
  std::normal_distribution<double> g;
  CMat a(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = cd(g(rng), g(rng));
  if (hermitian) a = (a + a.adjoint()).eval() * 0.5;
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      if (std::popcount(static_cast<std::uint64_t>(i ^ j)) & 1) a(i, j) = 0.0;
  return a;
}

// Breadth-first distances on the nearest-neighbour graph.
std::vector<int> bfs_distances(const Lattice& lat, std::size_t from) {
  std::vector<int> d(lat.size(), -1);
  std::deque<std::size_t> queue{from};
  d[from] = 0;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (int axis = 0; axis < lat.dimension(); ++axis)
      for (int step : {-1, 1}) {
        std::vector<int> off(lat.dimension(), 0);
        off[axis] = step;
        auto y = lat.shifted(x, off);
        if (y && d[*y] < 0) {
          d[*y] = d[x] + 1;
          queue.push_back(*y);
        }
      }
  }
  return d;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, VerificationReport& rep)
      : cfg_(cfg), rep_(rep), lattice_(cfg.lattice()), rng_(make_rng(cfg.seed)) {}

  void run(const std::string& suite) {
    lap_ = Clock::now();
    try {
      if (suite == "geometry") geometry();
      else if (suite == "car") car();
      else if (suite == "spectrum") spectrum();
      else if (suite == "majorana") majorana();
      else if (suite == "doubling") doubling();
      else if (suite == "transform") transform();
      else if (suite == "flow") flow();
      else if (suite == "assembly") assembly();
      else if (suite == "localization") localization();
      else if (suite == "lr") lieb_robinson();
      else throw Error(Errc::config, "unknown suite " + suite);
    } catch (const Error& e) {
      if (e.code() == Errc::config) throw;
      record(suite + ".error", "suite completes", Status::fail, 0.0, 0.0, "", e.what());
    }
  }

 private:
  static std::mt19937_64 make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5117eu};
    return std::mt19937_64(seq);
  }

  void record(const std::string& id, const std::string& anchor, Status st, double measured, double tol,
              const std::string& rel, const std::string& detail = {}) {
    const auto now = Clock::now();
    CheckRecord c{id, anchor, st, measured, tol, rel, detail, std::chrono::duration<double>(now - lap_).count()};
    lap_ = now;
    rep_.add(std::move(c));
  }
  void le(const std::string& id, const std::string& anchor, double measured, double tol,
          const std::string& detail = {}) {
    record(id, anchor, measured <= tol ? Status::pass : Status::fail, measured, tol, "<=", detail);
  }
  void ge(const std::string& id, const std::string& anchor, double measured, double tol,
          const std::string& detail = {}) {
    record(id, anchor, measured >= tol ? Status::pass : Status::fail, measured, tol, ">=", detail);
  }
  void gt(const std::string& id, const std::string& anchor, double measured, double tol,
          const std::string& detail = {}) {
    record(id, anchor, measured > tol ? Status::pass : Status::fail, measured, tol, ">", detail);
  }
  void truth(const std::string& id, const std::string& anchor, bool ok, const std::string& detail = {}) {
    record(id, anchor, ok ? Status::pass : Status::fail, ok ? 1.0 : 0.0, 1.0, "==", detail);
  }
  void skip(const std::string& id, const std::string& anchor, const std::string& detail) {
    record(id, anchor, Status::skipped, 0.0, 0.0, "", detail);
  }
  double tol(const std::string& name, double fallback) const { return cfg_.tol(name, fallback); }

  // lazily built models
  const SingleParticleModel& model() {
    if (!model_) model_ = assemble_T(lattice_, cfg_.hopping(), cfg_.fermi_energy, cfg_.disorder());
    return *model_;
  }
  const InteractionSet& interaction() {
    if (!interaction_) interaction_ = cfg_.interaction();
    return *interaction_;
  }
  const BdgData& bdg() {
    if (!bdg_) bdg_ = build_A(model());
    return *bdg_;
  }

  // The doubled many-body window: the first `window` sites of the lattice.
  struct Window {
    Lattice lattice;
    SingleParticleModel model;
    BdgData bdg;
    InteractionSet V;
    DoubledHamiltonian dh;
    TransformedInteraction tv;
    CMat H0, Vt;
  };
  Window& window() {
    if (win_) return *win_;
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(cfg_.flow.window), lattice_.size());
    if (w > cfg_.max_doubled_sites)
      throw Error(Errc::dimension, "flow.window exceeds max_doubled_sites");
    std::optional<Lattice> lat;
    if (w == lattice_.size())
      lat = lattice_;
    else if (lattice_.dimension() == 1)
      lat = build_lattice({static_cast<int>(w)}, {false});
    else
      throw Error(Errc::unsupported, "a partial window needs a one-dimensional lattice");
    const auto n = static_cast<Eigen::Index>(w);
    SingleParticleModel m = model_from_matrix(*lat, model().T.topLeftCorner(n, n), cfg_.fermi_energy);
    BdgData b = build_A(m);
    std::vector<MonomialTerm> inside;
    for (const auto& t : interaction().terms)
      if (t.support.empty() || t.support.back() < w)
        inside.insert(inside.end(), t.monomials.begin(), t.monomials.end());
    InteractionSet V = make_interaction(w, inside);
    DoubledHamiltonian dh = build_doubled_h0(b, cfg_.max_doubled_sites);
    TransformedInteraction tv = transform_to_eta(V, b, cfg_.truncation);
    CMat H0 = dh.H0.dense();
    CMat Vt = CMat(tv.total().to_matrix(dh.space->dimension()));
    win_.emplace(Window{*lat, std::move(m), std::move(b), std::move(V), std::move(dh), std::move(tv), H0, Vt});
    return *win_;
  }
  const std::vector<FlowState>& path() {
    if (!path_) {
      Window& w = window();
      path_ = integrate_flow(w.H0, w.Vt, uniform_grid(cfg_.flow.s_max, cfg_.flow.steps), cfg_.flow.rk4_substeps);
    }
    return *path_;
  }
  double gamma() { return default_filter_gamma(path(), cfg_.flow.gamma_factor); }
  const AssembledInteractions& assembled() {
    if (!assembled_) assembled_ = assemble_all(path(), window().dh, window().tv, gamma());
    return *assembled_;
  }

  // Shell decomposition of the i-th effective interaction; none for a scalar group.
  const LocalizationShells* shells_of(std::size_t i) {
    const auto& all = assembled();
    if (shells_.empty()) shells_.resize(all.terms.size());
    const EffectiveInteraction& term = all.terms[i];
    if (term.support.empty()) return nullptr;
    if (!shells_[i]) {
      const Window& w = window();
      const int nmax = std::max(cfg_.localize.n_max, w.lattice.diameter());
      const ShellMode mode = term.kind == 1 ? ShellMode::flow_conjugation : ShellMode::filter;
      shells_[i] = shell_decompose(term.op, w.lattice, term.support, nmax, mode);
    }
    return &*shells_[i];
  }

  void geometry() {
    const std::string anchor = "lattice distance and balls Z_n = {z : dist(z, Z) <= n}";
    int mismatches = 0;
    for (std::size_t a = 0; a < lattice_.size(); ++a) {
      const std::vector<int> d = bfs_distances(lattice_, a);
      for (std::size_t b = 0; b < lattice_.size(); ++b) mismatches += d[b] != lattice_.distance(a, b);
    }
    le("geometry.distance_vs_bfs", anchor, mismatches, 0.0);

    int violations = 0;
    const int diam = lattice_.diameter();
    for (std::size_t c = 0; c < lattice_.size(); ++c) {
      SiteSet prev = {c};
      for (int n = 0; n <= diam + 1; ++n) {
        SiteSet cur = lattice_.ball({c}, n);
        for (std::size_t x : prev) violations += !contains(cur, x);
        prev = cur;
      }
      violations += lattice_.ball({c}, diam) != lattice_.all_sites();
    }
    le("geometry.ball_monotone", anchor, violations, 0.0, "Z in Z_n in Z_{n+1}, Z_diam = Lambda");

    int wrap = 0;
    for (std::size_t a = 0; a < lattice_.size(); ++a) {
      const auto ca = lattice_.coordinates(a);
      for (std::size_t b = 0; b < lattice_.size(); ++b) {
        const auto cb = lattice_.coordinates(b);
        int bound = 0;
        for (int ax = 0; ax < lattice_.dimension(); ++ax)
          bound += lattice_.boundary(ax) == Boundary::periodic ? lattice_.dims()[ax] / 2 : std::abs(ca[ax] - cb[ax]);
        wrap += lattice_.distance(a, b) > bound;
      }
    }
    le("geometry.periodic_bound", "periodic separation at most floor(side/2) per axis", wrap, 0.0);
  }

  void car() {
    const std::size_t n = std::min(lattice_.size(), kMaxLRModes);
    auto space = FockSpace::numbered(n);
    std::vector<SpMat> a, ad, c, d;
    for (std::size_t m = 0; m < n; ++m) {
      a.push_back(ladder(space, m, FactorKind::annihilate).matrix);
      ad.push_back(ladder(space, m, FactorKind::create).matrix);
      c.push_back(gapstab::majorana(space, m, Species::c).matrix);
      d.push_back(gapstab::majorana(space, m, Species::d).matrix);
    }
    SpMat id(space->dimension(), space->dimension());
    id.setIdentity();
    auto worst = [&](auto&& f) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          SpMat r = f(i, j);
          for (int k = 0; k < r.outerSize(); ++k)
            for (SpMat::InnerIterator it(r, k); it; ++it) w = std::max(w, std::abs(it.value()));
        }
      return w;
    };
    const double t = tol("car", 1e-13);
    const std::string anchor = "canonical anticommutation relations";
    le("car.creation_annihilation", anchor, worst([&](auto i, auto j) {
         return SpMat(a[i] * ad[j] + ad[j] * a[i] - (i == j ? id : SpMat(id * 0.0)));
       }), t, std::to_string(n) + " modes");
    le("car.annihilators", anchor, worst([&](auto i, auto j) { return SpMat(a[i] * a[j] + a[j] * a[i]); }), t);
    le("car.majorana_square", "c^2 = d^2 = 1/2", worst([&](auto i, auto j) {
         if (i != j) return SpMat(id * 0.0);
         return SpMat(SpMat(c[i] * c[i] - 0.5 * id) + SpMat(d[i] * d[i] - 0.5 * id));
       }), t);
    le("car.majorana_anticommutators", "{c_x, c_y} = delta_xy, {c_x, d_y} = 0", worst([&](auto i, auto j) {
         SpMat cc = c[i] * c[j] + c[j] * c[i] - (i == j ? id : SpMat(id * 0.0));
         SpMat cd_ = c[i] * d[j] + d[j] * c[i];
         return SpMat(cc + cd_);
       }), t);
    if (lattice_.size() <= kMaxPhysicalModes) {
      auto full = FockSpace::numbered(lattice_.size());
      OperatorMatrix v = interaction_operator(interaction(), full);
      OperatorMatrix p = parity_operator(full);
      le("car.parity_commutes", "even interactions commute with the parity", spectral_norm(SpMat(v.matrix * p.matrix - p.matrix * v.matrix)),
         tol("algebra", 1e-12));
    } else {
      skip("car.parity_commutes", "even interactions commute with the parity", "lattice too large");
    }
  }

  void spectrum() {
    const SingleParticleModel& m = model();
    const auto n = m.T.rows();
    le("spectrum.hermitian", "T = t - E_F is Hermitian", hermiticity_defect(m.T), tol("algebra", 1e-12));
    CMat D = CMat::Zero(n, n);
    D.diagonal() = m.eigenvalues.cast<cd>();
    le("spectrum.diagonalization", "U^* T U = diag(lambda)", max_abs(CMat(m.eigenvectors.adjoint() * m.T * m.eigenvectors - D)),
       tol("spectral", 1e-10));
    CMat bdg = CMat::Zero(2 * n, 2 * n);
    bdg.topLeftCorner(n, n) = m.T;
    bdg.bottomRightCorner(n, n) = -m.T.transpose();
    RVec got = eigh(bdg).values;
    std::vector<double> want;
    for (Eigen::Index i = 0; i < n; ++i) want.insert(want.end(), {m.eigenvalues(i), -m.eigenvalues(i)});
    std::sort(want.begin(), want.end());
    double pair = 0.0;
    for (Eigen::Index i = 0; i < 2 * n; ++i) pair = std::max(pair, std::abs(got(i) - want[i]));
    le("spectrum.pairing", "eigenvalues of diag(T, -T^t) come in pairs +-lambda", pair, tol("spectral", 1e-10));
    gt("spectrum.gap", "spectral gap at the Fermi energy", m.gap, kGaplessTol);

    Table& spec = rep_.table("spectrum", {"index", "eigenvalue"});
    for (Eigen::Index i = 0; i < n; ++i) spec.rows.push_back({static_cast<long long>(i), m.eigenvalues(i)});

    // Fermi-sea projection decays exponentially in a gapped model
    CMat P = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      if (m.eigenvalues(i) < 0.0) P += m.eigenvectors.col(i) * m.eigenvectors.col(i).adjoint();
    try {
      DecayFit f = fit_exponential_decay(P, lattice_);
      gt("spectrum.fermi_projection_decay", "exponential decay of the Fermi-sea projection", f.rate, 0.0,
         "C = " + format_double(f.prefactor) + ", r^2 = " + format_double(f.r_squared));
      Table& dec = rep_.table("decay", {"quantity", "r", "value"});
      for (auto [r, v] : f.samples) dec.rows.push_back({std::string("fermi_projection"), static_cast<long long>(r), v});
      rep_.results["spectrum"] = {{"sites", lattice_.size()},
                                  {"gap", m.gap},
                                  {"fermi_energy", m.fermi_energy},
                                  {"projection_decay_rate", f.rate}};
    } catch (const Error& e) {
      if (e.code() != Errc::insufficient_data) throw;
      skip("spectrum.fermi_projection_decay", "exponential decay of the Fermi-sea projection", e.what());
    }
  }

  void majorana() {
    const StructureReport s = structure_report(bdg(), model().gap);
    const double t = tol("spectral", 1e-10);
    le("majorana.A_imaginary", "A is purely imaginary", s.real_part, t);
    le("majorana.A_antisymmetric", "A is antisymmetric", s.antisymmetry_A, t);
    le("majorana.absA_symmetric", "|A| is real symmetric", s.symmetry_abs_A, t);
    le("majorana.absA_min_eig", "min eig |A| equals the single-particle gap", s.gap_mismatch, t,
       "min eig = " + format_double(s.min_eig_abs_A));
    le("majorana.sign_antisymmetric", "s(A) is antisymmetric", s.antisymmetry_sign, t);
    le("majorana.sign_squared", "s(A)^2 = 1", s.sign_squared, t);
    le("majorana.polar", "A = s(A)|A|", s.polar, t);
  }

  void doubling() {
    Window& w = window();
    const DoublingResidual r = verify_doubling_identity(w.bdg, w.dh);
    const double t = tol("spectral", 1e-10);
    const std::string anchor = "doubled Hamiltonian 2 i gamma~1 |A| gamma~2 = 2 eta^* |A| eta - tr|A|";
    le("doubling.gamma_form", anchor, r.gamma_form, t);
    le("doubling.tilde_form", anchor, r.tilde_form, t);
    le("doubling.tilde_selfadjoint", "rotated fermions are Majorana", r.tilde_selfadjoint, t);
    le("doubling.eta_car", "eta fermions satisfy the CAR", r.eta_car, t);
    le("doubling.spectrum", anchor, r.spectrum, t);
    le("doubling.trace_sign", "the +tr|A| form differs by exactly 2 tr|A|",
       std::abs(r.plus_trace_offset - 2.0 * w.dh.trace_abs_A), t,
       "offset " + format_double(r.plus_trace_offset));
    const CVec vac = CVec::Unit(w.dh.space->dimension(), 0);
    double worst = 0.0;
    for (const auto& lt : w.dh.local_terms) worst = std::max(worst, (lt.op.dense() * vac).norm());
    le("doubling.local_annihilation", "every local term annihilates the eta vacuum", worst, tol("algebra", 1e-12));
    le("doubling.ground_energy", "ground energy of eta^* |A| eta is 0",
       std::abs(eigh(w.H0).values(0)), t);
    ge("doubling.h0sq_nsq", "H0^2 - dE^2 N^2 >= 0", check_h0sq_vs_nsq(w.dh), -tol("positivity", 1e-9));
    const double sites = static_cast<double>(w.dh.sites);
    le("doubling.local_term_count", "at most |Lambda|(|Lambda|+1)/2 local terms",
       static_cast<double>(w.dh.local_terms.size()), sites * (sites + 1) / 2);
    rep_.results["doubling"] = {{"window_sites", w.dh.sites},
                                {"gap", w.dh.gap},
                                {"trace_abs_A", w.dh.trace_abs_A},
                                {"local_terms", w.dh.local_terms.size()}};
  }

  void transform() {
    Window& w = window();
    TransformedInteraction exact = transform_to_eta(w.V, w.bdg, 0.0);
    le("transform.oracle", "V written in eta modes equals the doubled-space operator",
       oracle_compare(w.V, exact, w.bdg), tol("spectral", 1e-10));
    bool even = true;
    for (const auto& t : exact.terms)
      for (const auto& [k, z] : t.poly.terms()) even = even && NormalOrderedPoly::even(k);
    truth("transform.even_parity", "transformed interactions have even parity", even);

    const AssumptionReport ar = validate_assumptions(interaction(), lattice_, cfg_.k_h);
    truth("transform.assumption_even", "interaction terms have even parity", ar.even_parity);
    truth("transform.assumption_weighted_sum", "sum of K_h^|X| ||V_X|| is finite", ar.weighted_sum_finite,
          "max weighted pair sum " + format_double(ar.max_weighted_sum));

    TransformedInteraction full = transform_to_eta(interaction(), bdg(), cfg_.truncation);
    LocalBoundProfile prof = local_bound_profile(full, lattice_);
    if (prof.fit) {
      gt("transform.local_bound_decay", "transformed interaction decays with distance", prof.fit->rate, 0.0,
         "C = " + format_double(prof.fit->prefactor) + ", r^2 = " + format_double(prof.fit->r_squared));
      Table& dec = rep_.table("decay", {"quantity", "r", "value"});
      for (auto [r, v] : prof.fit->samples) dec.rows.push_back({std::string("transformed_interaction"), static_cast<long long>(r), v});
    } else {
      skip("transform.local_bound_decay", "transformed interaction decays with distance", "fewer than two distances");
    }
    rep_.results["transform"] = {{"groups", full.terms.size()},
                                 {"epsilon", full.epsilon},
                                 {"dropped_mass", full.dropped_mass},
                                 {"decay_rate", prof.fit ? prof.fit->rate : 0.0}};
  }

  void flow() {
    Window& w = window();
    const auto& p = path();
    const FlowState& end = p.back();
    le("flow.intertwining", "U(s) P0(0) U(s)^* = P0(s)", end.intertwining_residual, tol("flow", 1e-6),
       "s = " + format_double(end.s));
    double unit = 0.0;
    for (const auto& st : p) unit = std::max(unit, st.unitarity_defect);
    le("flow.unitarity", "U(s) is unitary", unit, tol("algebra", 1e-12));
    gt("flow.gap_along_path", "gap of H0 + sV stays open along the flow", min_gap(p), kFlowGapTol);

    auto fine = integrate_flow(w.H0, w.Vt, uniform_grid(cfg_.flow.s_max, 2 * cfg_.flow.steps), cfg_.flow.rk4_substeps);
    const double coarse_r = end.intertwining_residual, fine_r = fine.back().intertwining_residual;
    const double floor = 1e-12;
    const double ratio = fine_r > 0.0 ? coarse_r / fine_r : std::numeric_limits<double>::infinity();
    if (coarse_r <= floor && fine_r <= floor)
      record("flow.refinement", "step refinement reduces the intertwining residual", Status::pass, ratio, 8.0, ">=",
             "both residuals at roundoff (" + format_double(coarse_r) + ", " + format_double(fine_r) + ")");
    else
      ge("flow.refinement", "step refinement reduces the intertwining residual", ratio, 8.0);

    const double g = gamma();
    const auto dim = w.H0.rows();
    const CMat one = CMat::Identity(dim, dim);
    le("flow.filter_unit", "R_s(1) = 1", spectral_norm(CMat(apply_filter(end, one, g) - one)), tol("algebra", 1e-12));
    const CMat Ht = end.tilde_hamiltonian();
    le("flow.filter_hamiltonian", "R_s(H~(s)) = H~(s)", spectral_norm(CMat(apply_filter(end, Ht, g) - Ht)),
       tol("algebra", 1e-12) * std::max(1.0, spectral_norm(Ht)));
    const CVec g0 = end.tilde_basis().col(0);
    const CMat P = g0 * g0.adjoint();
    double off = 0.0;
    for (int k = 0; k < 20; ++k) {
      CMat A = random_even(dim, rng_, false);
      CMat R = apply_filter(end, A, g);
      off = std::max(off, spectral_norm(CMat((one - P) * R * P)) / spectral_norm(A));
    }
    le("flow.filter_annihilation", "(1 - P0) R_s(A) P0 = 0", off, tol("spectral", 1e-10), "20 random operators");

    {
      // truncating the time integral at |t| = T costs at most the weight outside [-T, T]
      CMat A = random_even(dim, rng_);
      const double T = 240.0 / g;
      // enough nodes to resolve the fastest phase e^{i(E_m - E_n)t} over [-T, T]
      const double spread = end.energies.maxCoeff() - end.energies.minCoeff();
      const int order = std::max(400, static_cast<int>(std::ceil(2.0 * T * spread / M_PI)) + 200);
      const double q = quasi_adiabatic_check(end, A, T, order, g) / spectral_norm(A);
      const double tail = 2.0 * weight_tail_mass(g, T);
      le("flow.filter_time_domain", "time-domain filter integral matches the frequency kernel", q,
         tail + tol("quadrature", 1e-10), "T = " + format_double(T) + ", " + std::to_string(order) + " nodes, tail weight " + format_double(tail));
    }

    Table& ft = rep_.table("flow", {"s", "gap", "intertwining_residual", "unitarity_defect"});
    for (const auto& st : p) ft.rows.push_back({st.s, st.gap, st.intertwining_residual, st.unitarity_defect});

    if (lattice_.size() <= kMaxPhysicalModes) {
      auto space = FockSpace::numbered(lattice_.size());
      OperatorMatrix H0 = physical_h0(model(), space);
      OperatorMatrix V = interaction_operator(interaction(), space);
      std::vector<double> grid;
      for (int k = 0; k < cfg_.gap_curve.points; ++k)
        grid.push_back(cfg_.gap_curve.s_max * k / (cfg_.gap_curve.points - 1));
      GapCurve gc = gap_curve(H0.matrix, V.matrix, grid);
      gt("gap_curve.s_dagger", "gap(s) >= gap(0)/2 on [0, s_dagger]", gc.s_dagger, 0.0);
      bool nondeg = true;
      for (std::size_t k = 0; k < gc.s.size(); ++k)
        if (gc.s[k] <= gc.s_dagger) nondeg = nondeg && gc.nondegenerate[k];
      truth("gap_curve.nondegenerate", "unique ground state on [0, s_dagger]", nondeg);
      le("gap_curve.lipschitz", "gap jumps bounded by 2||V|| ds", gc.max_slope, gc.lipschitz_bound);
      Table& t = rep_.table("gap_curve", {"s", "E0", "E1", "gap", "nondegenerate"});
      for (std::size_t k = 0; k < gc.s.size(); ++k)
        t.rows.push_back({gc.s[k], gc.E0[k], gc.E1[k], gc.gap[k], static_cast<long long>(gc.nondegenerate[k])});
      rep_.results["gap_curve"] = {{"s_dagger", gc.s_dagger},
                                   {"gap0", gc.gap.front()},
                                   {"lipschitz_bound", gc.lipschitz_bound},
                                   {"max_slope", gc.max_slope},
                                   {"continuous", gc.continuous}};
    } else {
      skip("gap_curve.s_dagger", "gap(s) >= gap(0)/2 on [0, s_dagger]", "lattice too large");
    }
    rep_.results["flow"] = {{"s_max", end.s}, {"steps", cfg_.flow.steps}, {"gamma", g}, {"min_gap", min_gap(p)}};
  }

  void assembly() {
    Window& w = window();
    const auto& all = assembled();
    const double t = tol("annihilation", 1e-8);
    const std::string anchor = "W^(i) annihilates the unperturbed ground state";
    le("assembly.W1_annihilation", anchor, all.max_annihilation(1), t);
    le("assembly.W2_annihilation", anchor, all.max_annihilation(2), t);
    le("assembly.W3_annihilation", anchor, all.max_annihilation(3), t);
    le("assembly.reconstruction", "U^* H(s) U = H0 + W1 + W2 + W3 + const",
       reconstruct_hamiltonian(path().back(), w.H0, w.Vt, all.terms), tol("reconstruction", 1e-7));

    const CMat W = all.sum(0);
    const CMat W1 = all.sum(1), W2 = all.sum(2), W3 = all.sum(3);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      CVec psi(W.rows());
      for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = cd(g(rng_), g(rng_));
      psi.normalize();
      const double lhs = (W * psi).squaredNorm();
      const double rhs = 3.0 * ((W1 * psi).squaredNorm() + (W2 * psi).squaredNorm() + (W3 * psi).squaredNorm());
      worst = std::max(worst, lhs - rhs);
    }
    le("assembly.cross_terms", "<(sum W)^2> <= 3 sum <W_i^2>", worst, tol("positivity", 1e-9));

    const double dE = w.dh.gap;
    const double b = relative_bound_b(W, w.H0);
    const GapBound bound = gap_lower_bound(b, dE);
    const RVec ev = eigh(CMat(w.H0 + W)).values;
    const double e1 = ev(1) - ev(0);
    if (bound.valid)
      ge("assembly.gap_bound", "E~1 >= (1 - b/sqrt(1-2b)) dE", e1 - bound.value, -tol("positivity", 1e-9),
         "b = " + format_double(b) + ", bound = " + format_double(bound.value));
    else
      skip("assembly.gap_bound", "E~1 >= (1 - b/sqrt(1-2b)) dE", "b = " + format_double(b) + " outside the valid range");

    std::vector<LocalW> locals;
    for (const auto& term : all.terms) locals.push_back({w.dh.space->all(), term.op});
    const LemmaResult lem = g_norm_and_lemma(w.dh.space, locals, w.H0, dE, lemma_trials(w.H0, 50, cfg_.seed));
    le("assembly.lemma_ratio", "||W psi||^2 <= (g~/dE)^2 ||H0 psi||^2", lem.worst_ratio, 1.0 + tol("ratio", 1e-9));
    const std::size_t nx = std::min<std::size_t>(3, w.dh.space->modes());
    le("assembly.decomposition_identity", "1 - P_{0,X} = sum_n Q_{n-1} q_n",
       decomposition_identity(w.dh.space, ModeSet::range(nx)), tol("car", 1e-13));
    le("assembly.wx_decomposition", "W_X = sum q_m Q^*_{m-1} W_X Q_{n-1} q_n",
       wx_decomposition_residual(w.dh.space, w.dh.space->all(), W), tol("spectral", 1e-10) * std::max(1.0, spectral_norm(W)));

    Json rows = Json::array();
    for (std::size_t i = 0; i < all.terms.size(); ++i) {
      const EffectiveInteraction& term = all.terms[i];
      Json row;
      row["kind"] = term.kind;
      row["Z"] = term.label;
      row["s"] = term.s;
      row["norm"] = term.norm;
      row["annihilation_residual"] = term.annihilation_residual;
      Json loc = Json::array();
      if (const LocalizationShells* sh = shells_of(i))
        for (const auto& s : sh->shells) loc.push_back(Json::array({s.n, s.norm}));
      row["localized"] = std::move(loc);
      rows.push_back(std::move(row));
    }
    rep_.results["assembly"] = {{"s", all.s},
                                {"norms", {all.norm(1), all.norm(2), all.norm(3)}},
                                {"relative_bound_b", b},
                                {"gap_bound", bound.value},
                                {"E1", e1},
                                {"terms", std::move(rows)}};
  }

  void localization() {
    Window& w = window();
    const FockSpacePtr& space = w.dh.space;
    const auto dim = space->dimension();
    const CMat one = CMat::Identity(dim, dim);
    const CMat xi = ladder(space, 0, FactorKind::annihilate).dense();
    const CMat q = number(space, 0).dense();
    le("localization.pin_xi", "average over x of xi_x is 0", max_abs(single_mode_average(xi, 0)), 0.0);
    le("localization.pin_q", "average over x of q_x is 1/2", max_abs(CMat(pi_bar(q, ModeSet::of({0})) - 0.5 * one)), 0.0);
    bool rejected = false;
    try {
      pi_bar(xi, ModeSet::of({0}));
    } catch (const Error& e) {
      rejected = e.code() == Errc::parity;
    }
    truth("localization.odd_rejected", "conditional expectation needs even parity", rejected);
    const CMat xi1 = ladder(space, 1, FactorKind::annihilate).dense();
    le("localization.odd_remark", "average over x of q_x xi_y is (2 q_x - 1) xi_y / 2",
       max_abs(CMat(single_mode_average(CMat(q * xi1), 0) - 0.5 * (2.0 * q - one) * xi1)), tol("car", 1e-13));

    const CMat A = random_even(dim, rng_);
    const ModeSet X = ModeSet::range(std::min<std::size_t>(3, space->modes()));
    le("localization.composition_vs_direct", "single-mode averages compose to the 4^|X| average",
       max_abs(CMat(pi_bar(A, X) - pi_bar_direct(A, X))), tol("algebra", 1e-12));
    const ModeSet left = support_of(OperatorMatrix::from_dense(space, pi_bar(A, X)), 1e-10) & X;
    le("localization.support_reduction", "supp Pi_X(A) misses X", static_cast<double>(left.size()), 0.0);
    const ModeSet keep = ModeSet::of({0, 1});
    const CMat TA = pi_truncate(A, keep);
    le("localization.truncation_norm", "||Pi~_X(A)|| <= ||A||", spectral_norm(TA) - spectral_norm(A), tol("algebra", 1e-12));
    le("localization.truncation_idempotent", "Pi~_X Pi~_X = Pi~_X", max_abs(CMat(pi_truncate(TA, keep) - TA)), tol("algebra", 1e-12));
    le("localization.unital", "Pi~_X(1) = 1", max_abs(CMat(pi_truncate(one, keep) - one)), tol("algebra", 1e-12));
    // the lemma probes 4^|Y| unitaries, so it runs on four modes
    const TruncationLemmaCheck lem = truncation_lemma(random_even(16, rng_), keep);
    truth("localization.truncation_lemma", "||A - Pi~_X(A)|| <= sup ||[A, B]|| / ||B|| off X", lem.holds,
          "lhs " + format_double(lem.lhs) + ", epsilon " + format_double(lem.epsilon));

    const auto& all = assembled();
    Table& shells = rep_.table("shells", {"Z", "n", "shell_norm", "annihilation_residual"});
    double tele = 0.0, sum_res = 0.0, ann = 0.0;
    bool support_ok = true;
    int split = 0;
    for (std::size_t i = 0; i < all.terms.size(); ++i) {
      const EffectiveInteraction& term = all.terms[i];
      const LocalizationShells* found = shells_of(i);
      if (!found) continue;
      const LocalizationShells& sh = *found;
      tele = std::max(tele, sh.telescoping_residual + sh.tail_norm);
      support_ok = support_ok && sh.support_violation == 0.0;
      const std::string z = "W" + std::to_string(term.kind) + " " + term.label;
      for (const auto& s : sh.shells)
        shells.rows.push_back({z, static_cast<long long>(s.n), s.norm, s.annihilation_residual});
      SandwichSplit sp = sandwich_split(term, sh);
      sum_res = std::max(sum_res, sp.sum_residual);
      ann = std::max(ann, sp.max_annihilation);
      support_ok = support_ok && sp.supports_ok;
      ++split;
    }
    le("localization.telescoping", "sum of shells reconstructs W_Z", tele, tol("spectral", 1e-10),
       std::to_string(split) + " interactions");
    le("localization.sandwich_sum", "sum_n W_{Z,n} = W_Z", sum_res, tol("spectral", 1e-10));
    le("localization.sandwich_annihilation", "W_{Z,n} P0 = 0", ann, tol("annihilation_local", 1e-9));
    truth("localization.sandwich_support", "supp W_{Z,n} in Z_n", support_ok);
  }

  void lieb_robinson() {
    const std::string anchor = "Lieb-Robinson commutator growth";
    if (lattice_.size() > kMaxLRModes) {
      skip("lr.profile", anchor, "lattice larger than " + std::to_string(kMaxLRModes) + " sites");
      return;
    }
    auto space = FockSpace::numbered(lattice_.size());
    OperatorMatrix H = physical_h0(model(), space) + interaction_operator(interaction(), space);
    Evolution ev(H);
    std::vector<double> ts;
    for (int k = 0; k < cfg_.lr.points; ++k) ts.push_back(cfg_.lr.t_max * k / (cfg_.lr.points - 1));
    const OperatorMatrix A = number(space, 0);
    const CMat a = A.dense();
    le("lr.isometry", "||tau_t(A)|| = ||A||", isometry_defect(ev, a, ts), tol("spectral", 1e-10));
    le("lr.group_law", "tau_{t+s} = tau_t tau_s", group_law_defect(ev, a, 0.37 * cfg_.lr.t_max, 0.21 * cfg_.lr.t_max),
       tol("spectral", 1e-10));

    // one probe site per distance from site 0
    std::map<int, std::size_t> probes;
    for (std::size_t y = 1; y < lattice_.size(); ++y) probes.emplace(lattice_.distance(0, y), y);
    std::vector<LRProfile> profiles;
    double at_zero = 0.0, over = 0.0;
    Table& t = rep_.table("lr", {"r", "t", "norm"});
    for (auto [r, y] : probes) {
      LRProfile p = commutator_profile(ev, A, number(space, y), ts, lattice_);
      at_zero = std::max(at_zero, p.samples.front().norm);
      for (const auto& s : p.samples) {
        over = std::max(over, s.norm - p.bound);
        t.rows.push_back({static_cast<long long>(r), s.t, s.norm});
      }
      profiles.push_back(std::move(p));
    }
    le("lr.zero_at_t0", "[A, B] = 0 for disjoint even A, B", at_zero, tol("algebra", 1e-12));
    le("lr.trivial_bound", "||[tau_t(A), B]|| <= 2||A|| ||B||", over, tol("algebra", 1e-12));
    try {
      VelocityFit f = fit_velocity(profiles, cfg_.lr.theta);
      // Only translation invariant hopping orders the arrivals; dimerized or
      // disordered chains can reach a far site through a strong bond first.
      if (cfg_.entries.empty() && cfg_.disorder_width == 0.0)
        truth("lr.monotone_arrival", "arrival time grows with distance", f.monotone);
      else
        skip("lr.monotone_arrival", "arrival time grows with distance",
             std::string("hopping is not translation invariant; arrivals ") + (f.monotone ? "monotone" : "not monotone"));
      const bool finite = std::isfinite(f.velocity) && f.velocity > 0.0;
      truth("lr.velocity", "finite Lieb-Robinson velocity", finite,
            "v = " + format_double(f.velocity) + " at theta " + format_double(f.theta));
      Json arr = Json::array();
      for (std::size_t i = 0; i < f.distances.size(); ++i) arr.push_back(Json::array({f.distances[i], f.arrival_times[i]}));
      rep_.results["lr"] = {{"theta", f.theta}, {"velocity", f.velocity}, {"r_squared", f.r_squared}, {"arrivals", arr}};
    } catch (const Error& e) {
      if (e.code() != Errc::insufficient_signal && e.code() != Errc::invalid_input) throw;
      skip("lr.monotone_arrival", "arrival time grows with distance", e.what());
      record("lr.velocity", "finite Lieb-Robinson velocity", Status::fail, 0.0, 0.0, "", e.what());
    }

    // reference envelope
    const double mu = 1.0, r0 = 1.0;
    bool mono = true;
    double prev = reference_decay(mu, r0, 0.0, lattice_.dimension()).F;
    for (int k = 1; k <= 400; ++k) {
      const double F = reference_decay(mu, r0, 0.1 * k, lattice_.dimension()).F;
      mono = mono && F <= prev * (1.0 + 1e-14);
      prev = F;
    }
    truth("lr.reference_monotone", "F_{mu,r0}(r) is nonincreasing", mono);
    le("lr.reference_plateau", "u~_mu(0) = exp(-mu e^2 / 4)",
       std::abs(reference_decay(mu, r0, 0.0).u - std::exp(-mu * std::exp(2.0) / 4.0)), 1e-15);
  }

  const RunConfig& cfg_;
  VerificationReport& rep_;
  Lattice lattice_;
  std::mt19937_64 rng_;
  Clock::time_point lap_;
  std::optional<SingleParticleModel> model_;
  std::optional<InteractionSet> interaction_;
  std::optional<BdgData> bdg_;
  std::optional<Window> win_;
  std::optional<std::vector<FlowState>> path_;
  std::optional<AssembledInteractions> assembled_;
  std::vector<std::optional<LocalizationShells>> shells_;
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "car",       "spectrum", "majorana",     "doubling",
                                              "transform", "flow",     "assembly", "localization", "lr"};
  return names;
}

std::vector<std::string> resolve_suites(const std::vector<std::string>& requested) {
  std::set<std::string> want;
  for (const auto& r : requested) {
    if (r == "all") {
      want.insert(suite_names().begin(), suite_names().end());
      continue;
    }
    if (std::find(suite_names().begin(), suite_names().end(), r) == suite_names().end())
      throw Error(Errc::config, "unknown suite '" + r + "'");
    want.insert(r);
  }
  std::vector<std::string> out;
  for (const auto& n : suite_names())
    if (want.count(n)) out.push_back(n);
  return out;
}

void validate_config(const RunConfig& config) {
  const Lattice lat = config.lattice();
  const HoppingSpec h = config.hopping();
  for (const auto& e : h.entries)
    if (e.i >= lat.size() || e.j >= lat.size())
      throw Error(Errc::site_out_of_range, "hopping entry outside the lattice");
  for (const auto& b : h.bonds)
    if (b.offset.size() != static_cast<std::size_t>(lat.dimension()))
      throw Error(Errc::invalid_dimension, "bond offset rank differs from the lattice dimension");
  config.interaction();
}

VerificationReport run_suite(const RunConfig& config, const std::vector<std::string>& suites,
                             const std::string& command) {
  validate_config(config);
  VerificationReport rep;
  rep.command = command;
  rep.seed = config.seed;
  rep.config_hash = config_hash(config);
  Runner runner(config, rep);
  for (const auto& s : resolve_suites(suites)) runner.run(s);
  return rep;
}

}  // namespace gapstab
