#include "dginj/duality.hpp"

#include <algorithm>

#include "dginj/generators.hpp"
#include "dginj/injstruct.hpp"

namespace dginj {

namespace {

ModPtr mp(DGModule M) { return std::make_shared<DGModule>(std::move(M)); }

int highest_or(const DGModule& M, int fb) { return M.is_zero_space() ? fb : M.highest_nonzero(); }

Mat vec(const Mat& m) {
    Mat v(m.field(), m.rows() * m.cols(), 1);
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (!m.entry_zero(i, j)) v.set(j * m.rows() + i, 0, m.at(i, j));
    return v;
}

// Hom_R(X, Y) as an R-module (commutative R), basis from hom_basis
H0Module hom_module(const H0Module& X, const H0Module& Y) {
    const Field f = X.ring->field;
    auto B = hom_basis(X, Y);
    H0Module H{X.ring, static_cast<int>(B.size()), {}};
    Mat V(f, X.dim * Y.dim, 0);
    for (auto& b : B) V = Mat::hcat(V, vec(b));
    for (int r = 0; r < X.ring->dim; ++r) {
        Mat act(f, H.dim, H.dim);
        for (int k = 0; k < H.dim; ++k) {
            auto c = solve(V, vec(Y.act[r] * B[k]));
            if (!c) throw Error("Hom module is not closed under the action");
            act.put(0, k, *c);
        }
        H.act.push_back(act);
    }
    return H;
}

bool invertible(const Mat& h) { return h.rows() == h.cols() && (h.rows() == 0 || rank(h) == h.rows()); }

bool iso_window(const ChainMap& f, int lo, int hi, json& tab) {
    bool ok = true;
    for (int n = lo; n <= hi; ++n) {
        Mat h = induced_on_cohomology(f, n);
        tab.push_back({n, h.cols(), h.rows()});
        ok = ok && invertible(h);
    }
    return ok;
}

bool derived_qiso(const DerivedMorphism& f, int lo, int hi) {
    for (int n = lo; n <= hi; ++n)
        if (!invertible(derived_on_cohomology(f, n))) return false;
    return true;
}

std::vector<Mat> factor_idems(const AlgPtr& A) {
    const auto& R = *A->h0().ring;
    if (!R.commutative) throw Unsupported("dualizing modules need a commutative algebra");
    return primitive_idempotents(R);
}

Cut block_cut(const ModPtr& M, int t) {
    auto blocks = M->algebra()->blocks();
    if (blocks.size() == 1) return {M, identity_map(M), identity_map(M)};
    return cut_module(M, blocks[t].e);
}

// a vector of the regular module in degree n as an element of A
Mat as_elem(const AlgPtr& A, const Mat& v, int n) {
    Mat x(A->field(), A->dim(), 1);
    x.put(A->range(n).first, 0, v);
    return x;
}

// x . pi in Hom(P_X, X)^{|x|}, pi the augmentation
Mat scalar_cycle(const HomComplex& H, const Mat& pi, const Mat& x, int deg) {
    return H.C->action_elem(x, deg, 0) * pi;
}

}  // namespace

json DualizingCertificate::to_json() const {
    return json{{"dualizing", dualizing}, {"decided", decided}, {"injdim", injdim.str()},
                {"shifts", shifts}, {"normalization_shift", normalization_shift},
                {"shifts_agree", shifts_agree}, {"report", report.to_json()}};
}

// ---------------- units ----------------

Report endo_unit_check(const ModPtr& R) {
    Report r("endo_unit");
    const AlgPtr& A = R->algebra();
    const Field f = A->field();
    const int top = 2, bot = A->lowest_degree() - 1;
    auto RR = resolve(R, hom_floor(R, R, top));
    auto H = hom_complex(*RR, R);
    Mat pi = map_to_hom_element(H, RR->pi);
    auto Areg = mp(regular_module(A));
    ChainMap u = make_chain_map(Areg, H.C);
    for (int n = Areg->lo(); n <= Areg->hi(); ++n) {
        auto [a0, a1] = A->range(n);
        Mat F(f, H.C->dim(n), a1 - a0);
        for (int a = a0; a < a1; ++a) F.put(0, a - a0, scalar_cycle(H, pi, A->basis_vec(a), n));
        u.set(n, F);
    }
    if (!r.add("chain_map", validate(u).ok())) return r;
    json tab = json::array();
    bool q = iso_window(u, bot, top, tab);
    r.add("A_to_RHom_R_R_quasi_iso", q, {{"window", {bot, top}}, {"table", tab}});
    return r;
}

Report biduality_check(const ModPtr& M, const ModPtr& R) {
    Report r("biduality");
    const Field f = M->field();
    if (M->is_zero_space() || is_acyclic(*M)) {
        r.add("zero_module", true);
        return r;
    }
    const int lowM = lowest_or(*M, 0), hiM = highest_or(*M, 0);
    const int loR = lowest_or(*R, 0), hiR = highest_or(*R, 0);
    // RHom(M,R) is exact up to c1, so RHom of the truncation error lives below lowM - 1
    const int floorM = std::min(lowM - 2, loR - (hiR - lowM + 1) - 1);
    auto RM = resolve(M, floorM);
    auto H1 = hom_complex(*RM, R);
    auto D = H1.C;
    auto RD = resolve(D, loR - hiM - 2);
    auto H2 = hom_complex(*RD, R);
    const auto& gd = RD->layout.gens();
    const auto& PM = *RM->P;
    // eta(p)(q) = (-1)^{|p||q|} pi_D(q)(p)
    ChainMap eta = make_chain_map(RM->P, H2.C);
    for (int m = PM.lo(); m <= PM.hi(); ++m) {
        Mat F(f, H2.C->dim(m), PM.dim(m));
        if (PM.dim(m))
            for (size_t l = 0; l < gd.size(); ++l) {
                const int fl = gd[l].deg, tl = gd[l].block;
                const Cut& c = H2.cuts[tl];
                if (!c.module->dim(fl + m)) continue;
                Mat q = RD->pi.at(fl).col(RD->layout.gen_index(static_cast<int>(l)));
                Mat ev = hom_eval(H1, q, fl, m);
                F.add_block(H2.offset(static_cast<int>(l), m), 0, c.proj.at(fl + m) * ev,
                            sign_scalar(f, (static_cast<long>(m) * fl) % 2 != 0));
            }
        eta.set(m, F);
    }
    if (!r.add("unit_is_chain_map", validate(eta).ok())) return r;
    json tab = json::array();
    bool q = iso_window(eta, lowM - 1, hiM + 1, tab);
    r.add("unit_quasi_iso", q, {{"window", {lowM - 1, hiM + 1}}, {"table", tab}});
    return r;
}

// ---------------- dualizing test ----------------

DualizingCertificate is_dualizing(const ModPtr& R, int samples, uint64_t seed) {
    DualizingCertificate c;
    c.R = R;
    c.report = Report("is_dualizing");
    const AlgPtr& A = R->algebra();
    auto idem = factor_idems(A);
    if (is_acyclic(*R)) {
        c.decided = true;
        c.report.add("nonzero", false);
        return c;
    }
    c.injdim = inj_dim(R);
    if (!c.injdim.decided) {
        c.report.undecided("finite_injective_dimension", {{"injdim", c.injdim.str()}});
        return c;
    }
    c.decided = true;
    c.report.add("finite_injective_dimension", true, {{"injdim", c.injdim.value}});
    // Ext^i(H0, R) vanishes outside [inf R, injdim R]
    auto H0 = mp(h0_as_module(A));
    const int lo = lowest_or(*R, 0), hi = c.injdim.value;
    std::vector<std::vector<int>> degs(idem.size());
    std::vector<std::vector<H0Module>> parts(idem.size());
    json table = json::array();
    for (int i = lo; i <= hi; ++i) {
        H0Module X = ext(H0, R, i);
        json row = json::array({i});
        for (size_t t = 0; t < idem.size(); ++t) {
            H0Module Xt = cut_h0(X, idem[t]);
            row.push_back(Xt.dim);
            if (Xt.dim) {
                degs[t].push_back(i);
                parts[t].push_back(Xt);
            }
        }
        table.push_back(row);
    }
    bool all = true;
    for (size_t t = 0; t < idem.size(); ++t) {
        std::string tag = "factor" + std::to_string(t);
        bool one = degs[t].size() == 1;
        bool matlis = one && find_isomorphism(parts[t][0], standard_injective_h0(A, static_cast<int>(t))).has_value();
        c.report.add(tag + ".concentrated", one, {{"degrees", degs[t]}});
        if (one) c.report.add(tag + ".matlis_dual", matlis);
        all = all && one && matlis;
        c.shifts.push_back(one ? degs[t][0] : 0);
    }
    c.report.add("rhom_h0_table", true, {{"table", table}});
    c.shifts_agree = std::adjacent_find(c.shifts.begin(), c.shifts.end(), std::not_equal_to<>()) == c.shifts.end();
    c.normalization_shift = c.shifts.empty() ? 0 : c.shifts[0];
    c.dualizing = all;
    if (!all) return c;
    // consequences of being dualizing, computed directly
    Report u = endo_unit_check(R);
    c.report.merge(u, "unit");
    bool bi = true;
    json wit = json::array();
    for (auto& M : sample_modules(A, seed, samples, 8)) {
        Report b = biduality_check(M, R);
        wit.push_back(b.ok());
        bi = bi && b.ok();
    }
    c.report.add("biduality_samples", bi, {{"samples", wit}});
    c.dualizing = u.ok() && bi;
    return c;
}

Normalized normalize(const ModPtr& R, int samples) {
    Normalized out;
    out.report = Report("normalize");
    auto c = is_dualizing(R, samples);
    if (!out.report.add("input_dualizing", c.dualizing, c.to_json())) {
        out.module = R;
        out.cert = c;
        return out;
    }
    const AlgPtr& A = R->algebra();
    if (c.shifts.size() <= 1) {
        out.module = c.normalization_shift ? mp(shift(*R, c.normalization_shift)) : R;
    } else {
        std::vector<DGModule> parts;
        for (size_t t = 0; t < c.shifts.size(); ++t)
            parts.push_back(shift(*block_cut(R, static_cast<int>(t)).module, c.shifts[t]));
        out.module = mp(direct_sum(parts));
        out.report.add("per_factor_shifts", true, {{"shifts", c.shifts}, {"agreed", c.shifts_agree}});
    }
    out.cert = is_dualizing(out.module, samples);
    bool zero = std::all_of(out.cert.shifts.begin(), out.cert.shifts.end(), [](int s) { return s == 0; });
    out.report.add("normalized", out.cert.dualizing && zero, {{"shifts", out.cert.shifts}});
    (void)A;
    return out;
}

// ---------------- RΓ(R) = E ----------------

Report rgamma_of_dual_check(const ModPtr& R) {
    Report r("rgamma_of_dual");
    const AlgPtr& A = R->algebra();
    const int nf = static_cast<int>(factor_idems(A).size());
    for (int i = 0; i < nf; ++i) {
        std::string tag = "factor" + std::to_string(i);
        auto T = local_cohomology(R, maximal_ideal(A, i));
        auto Ei = standard_injective(A, i).module;
        auto iso = find_isomorphism(cohomology(*T.module, 0), cohomology(*Ei, 0));
        if (!r.add(tag + ".h0_iso", iso.has_value())) continue;
        auto l = lift_morphism_through_h0(T.module, Ei, *iso);
        if (!r.add(tag + ".lifts", l.f.has_value(), l.report.to_json())) continue;
        int lo = std::min(lowest_or(*T.module, 0), lowest_or(*Ei, 0));
        int hi = std::max(highest_or(*T.module, 0), highest_or(*Ei, 0));
        r.add(tag + ".quasi_iso", derived_qiso(*l.f, lo, hi), {{"window", {lo, hi}}});
    }
    return r;
}

// ---------------- local duality ----------------

Report local_duality_verify(const ModPtr& M, const ModPtr& R, uint64_t seed) {
    Report r("local_duality");
    const AlgPtr& A = R->algebra();
    if (A->blocks().size() != 1) {
        r.not_applicable("local_algebra", {{"factors", A->blocks().size()}});
        return r;
    }
    auto c = is_dualizing(R, 2);
    if (!r.add("normalized_dualizing", c.dualizing && c.normalization_shift == 0, c.to_json())) return r;
    r.merge(rgamma_of_dual_check(R), "part1");
    r.merge(biduality_check(M, R), "part1");
    auto m = maximal_ideal(A, 0);
    auto T = local_cohomology(M, m);
    r.merge(T.report, "rgamma");
    auto E = standard_injective(A, 0).module;
    H0Module Ebar = cohomology(*E, 0);
    const int lowM = lowest_or(*M, 0), hiM = highest_or(*M, 0);
    json ledger = json::array();
    bool dims_ok = true;
    Rng rng(seed);
    auto targets = sample_modules(A, seed, 2, 8);
    for (int n = lowM - 1; n <= hiM + 1; ++n) {
        std::string tag = "n" + std::to_string(n);
        H0Module X = cohomology(*T.module, n);
        H0Module Ex = ext(M, R, -n);
        ledger.push_back({n, X.dim, Ex.dim});
        dims_ok = dims_ok && X.dim == Ex.dim;
        H0Module Y = hom_module(Ex, Ebar);
        r.add(tag + ".module_iso", X.dim == Y.dim && find_isomorphism(X, Y).has_value(), {{"dim", X.dim}});
        // the pairing H^n(M) x Ext^{-n}(M,R) -> H^0(R)
        auto RM = resolve(M, std::min(n - 1, lowest_or(*R, 0) + n - 2));
        Phi P(RM, R, -n);
        Report pc = P.check();
        r.merge(pc, tag + ".phi");
        if (X.dim && P.classes().dim()) {
            const Subquotient& S = P.classes();
            const int h = hdim(*R, 0);
            Mat LD(M->field(), h * S.dim(), X.dim);
            for (int k = 0; k < S.dim(); ++k) LD.put(k * h, 0, P.eval(S.reps.col(k)));
            r.add(tag + ".pairing_perfect", rank(LD) == X.dim && X.dim == S.dim());
        }
        // functoriality
        for (auto& N : targets) {
            ChainMap u = random_chain_map(M, N, rng);
            r.merge(phi_naturality_in_M(u, R, -n), tag + ".natural");
        }
    }
    r.add("length_ledger", dims_ok, {{"table", ledger}});
    return r;
}

// ---------------- amplitude ----------------

Report amp_check(const AlgPtr& A, const ModPtr& R) {
    Report r("amp");
    auto c = is_dualizing(R, 2);
    r.add("dualizing", c.dualizing, {{"shifts", c.shifts}});
    auto T = local_cohomology(mp(regular_module(A)), jacobson_ideal(A));
    r.merge(T.report, "rgamma");
    auto a1 = inf_sup_amp(*T.module), a2 = inf_sup_amp(*R);
    r.add("amplitudes_equal", a1.amp() == a2.amp(), {{"amp_rgamma", a1.amp()}, {"amp_R", a2.amp()}});
    return r;
}

// ---------------- RHom(E,E) ----------------

Report endo_cohomology_of_E(const AlgPtr& A, int i) {
    Report r("endo_of_E");
    const Field f = A->field();
    auto E = standard_injective(A, i).module;
    auto Ai = block_cut(mp(regular_module(A)), i);
    const int top = 1, bot = A->lowest_degree() - 1;
    auto RE = resolve(E, hom_floor(E, E, top));
    auto H = std::make_shared<HomComplex>(hom_complex(*RE, E));
    Mat pi = map_to_hom_element(*H, RE->pi);
    // e_i A -> RHom(E,E), a -> a.id (the action of the completed local ring)
    const auto& B = *Ai.module;
    ChainMap u = make_chain_map(Ai.module, H->C);
    for (int n = B.lo(); n <= B.hi(); ++n) {
        Mat F(f, H->C->dim(n), B.dim(n));
        Mat inc = Ai.incl.at(n);
        for (int k = 0; k < B.dim(n); ++k) F.put(0, k, scalar_cycle(*H, pi, as_elem(A, inc.col(k), n), n));
        u.set(n, F);
    }
    if (!r.add("chain_map", validate(u).ok())) return r;
    json tab = json::array();
    bool q = iso_window(u, bot, top, tab);
    r.add("graded_module_iso", q, {{"window", {bot, top}}, {"table", tab}});
    // ring structure on H^0: the classes of a.id compose as products
    Subquotient S0 = cohomology_space(B, 0);
    std::vector<Mat> xs;
    for (int k = 0; k < S0.dim(); ++k) xs.push_back(as_elem(A, Ai.incl.at(0) * S0.reps.col(k), 0));
    auto morph = [&](const Mat& x) { return derived(RE, E, scalar_cycle(*H, pi, x, 0)); };
    bool mult = true;
    for (auto& x : xs)
        for (auto& y : xs) mult = mult && derived_equal(compose(morph(x), morph(y)), morph(A->mul(x, y)));
    r.add("h0_multiplicative", mult, {{"dim_h0", S0.dim()}});
    auto End = endomorphism_algebra(E);
    r.add("h0_dimension", End.ring->dim == S0.dim(), {{"end", End.ring->dim}, {"local_ring", S0.dim()}});
    return r;
}

Report artinian_cohomology_check(const ModPtr& M, const IdealSpec& a) {
    Report r("artinian");
    auto T = local_cohomology(M, a);
    const AlgPtr& A = M->algebra();
    auto D = decompose_h0(A);
    json lengths = json::array();
    bool ok = true;
    for (int n = M->lo(); n <= M->hi() && !M->is_zero_space(); ++n) {
        H0Module X = cohomology(*T.module, n);
        int len = 0;
        for (int t = 0; t < D.size(); ++t) {
            int d = cut_h0(X, D.idempotents[t]).dim;
            ok = ok && d % D.factors[t].residue_dim == 0;
            len += d / D.factors[t].residue_dim;
        }
        lengths.push_back({n, len});
    }
    // finite length means artinian
    r.add("finite_length", ok, {{"lengths", lengths}});
    r.merge(T.report, "rgamma");
    return r;
}

}  // namespace dginj
