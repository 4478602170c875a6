#include "dginj/derivedfun.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace dginj {

namespace {

Scalar sgn(const Field& f, long e) { return sign_scalar(f, e % 2 != 0); }

ModPtr mp(DGModule M) { return std::make_shared<DGModule>(std::move(M)); }

Mat rows_of(const Mat& v, int r0, int n) { return v.block(r0, 0, n, v.cols()); }

// column-major vectorization
Mat flat(const Mat& m) {
    Mat v(m.field(), m.rows() * m.cols(), 1);
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (!m.entry_zero(i, j)) v.set(j * m.rows() + i, 0, m.at(i, j));
    return v;
}

// [[a, 0], [b, c]] x = [0; t]
std::optional<Mat> solve_pair(const Mat& a, const Mat& b, const Mat& c, const Mat& t) {
    const Field f = t.field();
    Mat big(f, a.rows() + b.rows(), a.cols() + c.cols());
    big.put(0, 0, a);
    big.put(a.rows(), 0, b);
    big.put(a.rows(), a.cols(), c);
    Mat rhs(f, big.rows(), 1);
    rhs.put(a.rows(), 0, t);
    auto x = solve(big, rhs);
    if (!x) return std::nullopt;
    return x->block(0, 0, a.cols(), 1);
}

int highest_or(const DGModule& M, int fb) { return M.is_zero_space() ? fb : M.highest_nonzero(); }

bool square_invertible(const Mat& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

}  // namespace

int lowest_or(const DGModule& M, int fb) { return M.is_zero_space() ? fb : M.lowest_nonzero(); }

ResPtr resolve(const ModPtr& M, int floor) {
    auto amp = inf_sup_amp(*M);
    if (!amp.empty) floor = std::min(floor, amp.inf);
    // the cached value holds M, so the address stays unique while cached
    static std::mutex mu;
    static std::map<std::pair<const DGModule*, int>, ResPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(M.get(), floor);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto R = std::make_shared<const SemiFreeResolution>(semifree_resolve(M, floor));
    if (cache.size() > 96) cache.clear();
    cache.emplace(key, R);
    return R;
}

int hom_floor(const ModPtr& M, const ModPtr& N, int imax) {
    int f = lowest_or(*N, 0) - imax - 1;
    auto amp = inf_sup_amp(*M);
    return amp.empty ? f : std::min(f, amp.inf);
}

// ---------------- primitives ----------------

Mat hom_eval(const HomComplex& H, const Mat& phi, int i, int m) {
    const auto& L = H.layout;
    const Field f = L.algebra()->field();
    Mat X(f, H.N->dim(m + i), L.dim(m));
    const auto& gens = L.gens();
    for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
        const int t = gens[j].block, e = gens[j].deg;
        const Cut& cut = H.cuts[t];
        const int d = cut.module->dim(e + i);
        if (!d) continue;
        const auto& B = L.block_alg(t);
        auto [c0, c1] = B.range(m - e);
        if (c0 == c1) continue;
        Mat v = cut.incl.at(e + i) * rows_of(phi, H.offset(j, i), d);
        const int oc = L.offset(j, m);
        for (int c = c0; c < c1; ++c) {
            Mat col = H.N->action_elem(L.blocks()[t].incl.col(c), B.degree(c), e + i) * v;
            X.add_block(0, oc + c - c0, col, sgn(f, static_cast<long>(B.degree(c)) * i));
        }
    }
    return X;
}

Mat postcompose(const HomComplex& HX, const HomComplex& HY, const ChainMap& w, int i) {
    const Field f = HX.layout.algebra()->field();
    Mat W(f, HY.C->dim(i), HX.C->dim(i));
    const auto& gens = HX.layout.gens();
    for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
        const int t = gens[j].block, e = gens[j].deg + i;
        const Cut &cx = HX.cuts[t], &cy = HY.cuts[t];
        if (!cx.module->dim(e) || !cy.module->dim(e)) continue;
        W.put(HY.offset(j, i), HX.offset(j, i), cy.proj.at(e) * w.at(e) * cx.incl.at(e));
    }
    return W;
}

ChainMap postcompose_map(const HomComplex& HX, const HomComplex& HY, const ChainMap& w) {
    ChainMap m = make_chain_map(HX.C, HY.C);
    for (int i = HX.C->lo(); i <= HX.C->hi(); ++i) m.set(i, postcompose(HX, HY, w, i));
    return m;
}

Mat precompose(const HomComplex& Hp, const HomComplex& H, const ChainMap& psi, int i) {
    const Field f = H.layout.algebra()->field();
    const auto& L = H.layout;
    const auto& Lp = Hp.layout;
    Mat out(f, H.C->dim(i), Hp.C->dim(i));
    const auto& gens = L.gens();
    const auto& gp = Lp.gens();
    for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
        const int t = gens[j].block, e = gens[j].deg;
        const Cut& cut = H.cuts[t];
        if (!cut.module->dim(e + i)) continue;
        // psi(g_j) = sum_k sum_c v_{k,c} c g'_k; phi(c g'_k) = (-1)^{|c| i} c phi(g'_k)
        Mat v = psi.at(e).col(L.gen_index(j));
        for (int k = 0; k < static_cast<int>(gp.size()); ++k) {
            const int tk = gp[k].block;
            const Cut& ck = Hp.cuts[tk];
            const int dk = ck.module->dim(gp[k].deg + i);
            if (!dk) continue;
            const auto& B = Lp.block_alg(tk);
            auto [c0, c1] = B.range(e - gp[k].deg);
            const int o = Lp.offset(k, e);
            for (int c = c0; c < c1; ++c) {
                if (v.entry_zero(o + c - c0, 0)) continue;
                Mat X = cut.proj.at(e + i) *
                        Hp.N->action_elem(Lp.blocks()[tk].incl.col(c), B.degree(c), gp[k].deg + i) *
                        ck.incl.at(gp[k].deg + i);
                out.add_block(H.offset(j, i), Hp.offset(k, i), X,
                              v.at(o + c - c0, 0) * sgn(f, static_cast<long>(B.degree(c)) * i));
            }
        }
    }
    return out;
}

std::optional<ChainMap> lift_through(const ChainMap& f, const SemiFreeResolution& RM, const SemiFreeResolution& RN) {
    HomComplex HPP = hom_complex(RM, RN.P);
    HomComplex HPN = hom_complex(RM, RN.target);
    Mat Pi = postcompose(HPP, HPN, RN.pi, 0);
    Mat t = map_to_hom_element(HPN, f);
    auto x = solve_pair(HPP.C->diff(0), Pi, -HPN.C->diff(-1), t);
    if (!x) return std::nullopt;
    return hom_cycle_to_map(HPP, *x);
}

// ---------------- derived morphisms ----------------

DerivedMorphism derived(const ResPtr& R, const ModPtr& tgt, const Mat& cycle) {
    auto H = std::make_shared<const HomComplex>(hom_complex(*R, tgt));
    if (cycle.rows() != H->C->dim(0)) throw Error("derived morphism: cycle has the wrong size");
    return DerivedMorphism{R, tgt, H, cycle};
}

DerivedMorphism derived_from_map(const ResPtr& R, const ChainMap& f) {
    if (f.src != R->target) throw Error("derived morphism: source is not the resolved module");
    auto H = std::make_shared<const HomComplex>(hom_complex(*R, f.tgt));
    return DerivedMorphism{R, f.tgt, H, map_to_hom_element(*H, compose(f, R->pi))};
}

DerivedMorphism derived_identity(const ResPtr& R) { return derived_from_map(R, identity_map(R->target)); }

Mat derived_on_cohomology(const DerivedMorphism& f, int n) {
    auto inv = inverse(induced_on_cohomology(f.res->pi, n));
    if (!inv) throw Error("degree " + std::to_string(n) + " is below the resolution window");
    return induced_on_cohomology(f.on_resolution(), n) * *inv;
}

DerivedMorphism rebase(const DerivedMorphism& f, const ResPtr& R2) {
    if (R2 == f.res) return f;
    if (R2->target != f.src()) throw Error("rebase: resolution of a different module");
    if (R2->floor >= f.res->floor && !f.res->complete) throw Error("rebase: new resolution is not deeper");
    auto psi = lift_through(f.res->pi, *f.res, *R2);
    if (!psi) throw Error("rebase: comparison map does not lift");
    auto H2 = std::make_shared<const HomComplex>(hom_complex(*R2, f.tgt));
    Mat pre = precompose(*H2, *f.hom, *psi, 0);
    auto x = solve_pair(H2->C->diff(0), pre, -f.hom->C->diff(-1), f.cycle);
    if (!x) throw Error("rebase: morphism does not extend to the deeper resolution");
    return DerivedMorphism{R2, f.tgt, H2, *x};
}

namespace {
std::pair<DerivedMorphism, DerivedMorphism> common_base(const DerivedMorphism& f, const DerivedMorphism& g) {
    if (f.src() != g.src() || f.tgt != g.tgt) throw Error("derived morphisms with different source or target");
    if (f.res == g.res) return {f, g};
    if (f.res->floor < g.res->floor) return {f, rebase(g, f.res)};
    if (g.res->floor < f.res->floor) return {rebase(f, g.res), g};
    auto R = resolve(f.src(), f.res->floor - 1);
    return {rebase(f, R), rebase(g, R)};
}
}  // namespace

bool derived_equal(const DerivedMorphism& f0, const DerivedMorphism& g0) {
    auto [f, g] = common_base(f0, g0);
    Mat d = f.cycle - g.cycle;
    if (d.is_zero()) return true;
    Mat B = f.hom->C->diff(-1);
    return B.cols() > 0 && in_span(B, d);
}

bool is_zero(const DerivedMorphism& f) {
    if (f.cycle.is_zero()) return true;
    Mat B = f.hom->C->diff(-1);
    return B.cols() > 0 && in_span(B, f.cycle);
}

DerivedMorphism compose(const DerivedMorphism& g0, const DerivedMorphism& f) {
    if (f.tgt != g0.src()) throw Error("compose: target of f is not the source of g");
    DerivedMorphism g = g0;
    if (g.res->floor >= f.res->floor && !g.res->complete) g = rebase(g, resolve(g.src(), f.res->floor - 1));
    auto lift = lift_through(f.on_resolution(), *f.res, *g.res);
    if (!lift) throw Error("compose: resolution of the middle object is too shallow to lift");
    auto H = std::make_shared<const HomComplex>(hom_complex(*f.res, g.tgt));
    return DerivedMorphism{f.res, g.tgt, H, map_to_hom_element(*H, compose(g.on_resolution(), *lift))};
}

// ---------------- Ext / Tor ----------------

H0Module ext(const ModPtr& M, const ModPtr& N, int i) {
    auto R = resolve(M, hom_floor(M, N, i));
    HomComplex H = hom_complex(*R, N);
    if (!H.certified(i)) throw Error("ext: degree outside the certified window");
    return cohomology(*H.C, i);
}

H0Module tor(const ModPtr& M, const ModPtr& N, int i) {
    int floor = -i - highest_or(*N, 0) - 1;
    auto R = resolve(M, floor);
    TensorComplex T = tensor_complex(*R, N);
    if (!T.certified(-i)) throw Error("tor: degree outside the certified window");
    return cohomology(*T.C, -i);
}

// ---------------- injective dimension ----------------

std::string InjDim::str() const {
    if (zero) return "-inf";
    return (decided ? "" : ">=") + std::to_string(value);
}

InjDim inj_dim(const ModPtr& M, int depth) {
    InjDim out;
    auto amp = inf_sup_amp(*M);
    if (amp.empty) {
        out.zero = out.decided = true;
        return out;
    }
    const AlgPtr& A = M->algebra();
    if (!A->commutative()) throw Unsupported("injective dimension needs a commutative algebra");
    auto Md = mp(k_dual(*M));
    const int floor = -amp.sup - depth;
    auto Q = resolve(Md, floor);
    const int nres = static_cast<int>(residue_characters(A).size());
    int minn = INT_MAX;
    json table = json::array();
    for (int t = 0; t < nres; ++t) {
        TensorComplex T = tensor_complex(*Q, mp(residue_module(A, t)));
        for (int n = T.C->lo(); n <= T.C->hi(); ++n) {
            if (!T.certified(n)) continue;
            int h = hdim(*T.C, n);
            if (!h) continue;
            minn = std::min(minn, n);
            table.push_back({{"residue", t}, {"degree", n}, {"dim", h}});
        }
    }
    if (minn == INT_MAX) throw Error("inj_dim: no Tor with a residue field in the window");
    out.decided = Q->complete;
    out.value = -minn;
    out.witness = {{"floor", Q->floor}, {"complete", Q->complete}, {"tor_with_residue_fields", table}};
    return out;
}

InjDim inj_dim_direct(const ModPtr& M, const std::vector<ModPtr>& Ns, int reach) {
    InjDim out;
    if (is_acyclic(*M)) {
        out.zero = out.decided = true;
        return out;
    }
    const AlgPtr& A = M->algebra();
    std::vector<ModPtr> all = Ns;
    for (size_t t = 0; t < residue_characters(A).size(); ++t) all.push_back(mp(residue_module(A, static_cast<int>(t))));
    int best = INT_MIN;
    json hits = json::array();
    for (size_t s = 0; s < all.size(); ++s) {
        auto amp = inf_sup_amp(*all[s]);
        if (amp.empty) continue;
        const int top = reach - amp.inf;
        auto R = resolve(all[s], hom_floor(all[s], M, top));
        HomComplex H = hom_complex(*R, M);
        for (int i = H.C->lo(); i <= std::min(top, H.C->hi()); ++i) {
            if (!H.certified(i) || !hdim(*H.C, i)) continue;
            if (i + amp.inf > best) {
                best = i + amp.inf;
                hits.push_back({{"sample", s}, {"i", i}, {"inf", amp.inf}});
            }
        }
    }
    out.value = best;
    out.witness = {{"reach", reach}, {"hits", hits}};
    return out;
}

// ---------------- Inj(A) ----------------

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Zero: return "zero";
        default: return "undecided";
    }
}

json InjCertificate::to_json() const {
    return {{"verdict", verdict_name(verdict)}, {"inf", inf},          {"h0_injective", h0_injective},
            {"window", window},                 {"injdim", injdim.str()}, {"witness", witness}};
}

InjCertificate is_inj_object(const ModPtr& M, int depth) {
    InjCertificate c;
    auto amp = inf_sup_amp(*M);
    if (amp.empty) {
        c.verdict = Verdict::Zero;
        c.injdim.zero = c.injdim.decided = true;
        return c;
    }
    const AlgPtr& A = M->algebra();
    if (!A->commutative()) throw Unsupported("Inj(A) membership needs a commutative algebra");
    c.inf = amp.inf;
    auto H0 = mp(h0_as_module(A));
    auto R = resolve(H0, hom_floor(H0, M, depth));
    HomComplex H = hom_complex(*R, M);
    bool concentrated = true;
    json dims = json::object();
    for (int i = std::min(H.C->lo(), 0); i <= depth; ++i) {
        if (!H.certified(i)) continue;
        c.window.push_back(i);
        int h = hdim(*H.C, i);
        if (h) dims[std::to_string(i)] = h;
        if (i != 0 && h) concentrated = false;
    }
    H0Module e0 = cohomology(*H.C, 0);
    c.h0_injective = is_injective(e0);
    c.witness = {{"ext_h0_dims", dims}, {"ext0_dim", e0.dim}};
    try {
        c.injdim = inj_dim(M);
    } catch (const Unsupported& e) {
        c.witness["injdim_unsupported"] = e.what();
        c.injdim.decided = false;
    }
    if (amp.inf != 0) {
        c.verdict = Verdict::No;
        c.witness["reason"] = "inf != 0";
    } else if (!concentrated) {
        c.verdict = Verdict::No;
        c.witness["reason"] = "RHom(H0,M) not concentrated in degree 0";
    } else if (!c.h0_injective) {
        c.verdict = Verdict::No;
        c.witness["reason"] = "Ext^0(H0,M) not injective";
    } else if (c.injdim.decided) {
        c.verdict = c.injdim.value == 0 ? Verdict::Yes : Verdict::No;
        if (c.injdim.value != 0) c.witness["reason"] = "injdim != 0";
    } else {
        c.verdict = Verdict::Undecided;
        c.witness["reason"] = "concentrated in the window; resolution of M* did not terminate";
    }
    return c;
}

// ---------------- checks ----------------

Report rhom_reflects_iso_check(const ChainMap& f, int depth) {
    Report r("rhom_reflects_iso");
    const ModPtr &M = f.src, &N = f.tgt;
    const AlgPtr& A = M->algebra();
    auto H0 = mp(h0_as_module(A));
    const int lo = std::min(lowest_or(*M, 0), lowest_or(*N, 0));
    const int top = std::max(highest_or(*M, 0), highest_or(*N, 0)) + depth;
    auto R = resolve(H0, lo - top - 1);
    HomComplex HM = hom_complex(*R, M), HN = hom_complex(*R, N);
    ChainMap W = postcompose_map(HM, HN, f);
    bool riso = true;
    json table = json::array();
    for (int i = std::min(HM.C->lo(), HN.C->lo()); i <= top; ++i) {
        if (!HM.certified(i) || !HN.certified(i)) continue;
        int a = hdim(*HM.C, i), b = hdim(*HN.C, i);
        int rk = rank(induced_on_cohomology(W, i));
        if (a || b) table.push_back({{"degree", i}, {"src", a}, {"tgt", b}, {"rank", rk}});
        if (!(a == b && rk == a)) riso = false;
    }
    const bool fiso = is_quasi_iso(f);
    json w = {{"rhom_iso", riso}, {"f_iso", fiso}, {"window_top", top}, {"table", table}};
    r.add("f_iso_implies_rhom_iso", !fiso || riso, w);
    r.add("rhom_iso_implies_f_iso", !riso || fiso, w);
    return r;
}

Alpha alpha_map(const ModPtr& M) {
    auto amp = inf_sup_amp(*M);
    if (!amp.empty && amp.sup > 0) throw Error("alpha: needs sup(M) <= 0");
    const AlgPtr& A = M->algebra();
    Report r("alpha");
    H0Module h = cohomology(*M, 0);
    auto H0M = mp(module_from_h0(A, h));
    auto R = resolve(M, (amp.empty ? 0 : std::min(amp.inf, 0)) - 2);
    ChainMap a = make_chain_map(R->P, H0M);
    if (h.dim && R->P->dim(0)) a.set(0, cohomology_space(*M, 0).proj * R->pi.at(0));
    auto H = std::make_shared<const HomComplex>(hom_complex(*R, H0M));
    DerivedMorphism al{R, H0M, H, map_to_hom_element(*H, a)};
    r.add("chain_map", validate(a).ok());
    r.add("h0_iso", square_invertible(derived_on_cohomology(al, 0)));
    auto C = cone(a);
    json nz = json::array();
    for (int m = -1; m <= C.hi(); ++m)
        if (hdim(C, m)) nz.push_back(m);
    r.add("fiber_sup_le_minus_1", nz.empty(), {{"cone_nonzero_degrees", nz}});
    return {al, H0M, r};
}

// ---------------- Phi ----------------

Phi::Phi(const ResPtr& R, const ModPtr& I, int n) : R_(R), I_(I), n_(n) {
    H_ = std::make_shared<const HomComplex>(hom_complex(*R, I));
    if (!H_->certified(n)) throw Error("Phi: degree outside the certified window");
    S_ = cohomology_space(*H_->C, n);
    auto inv = inverse(induced_on_cohomology(R->pi, -n));
    if (!inv) throw Error("Phi: H^{-n} of the resolution is not yet exact");
    back_ = cohomology_space(*R->P, -n).reps * *inv;
    SI_ = cohomology_space(*I, 0);
    X_ = cohomology(*R->target, -n);
    Y_ = cohomology(*I, 0);
    basis_ = hom_basis(X_, Y_);
}

Mat Phi::eval(const Mat& cycle) const {
    const Field f = I_->field();
    if (!X_.dim || !Y_.dim) return Mat(f, Y_.dim, X_.dim);
    return SI_.proj * hom_eval(*H_, cycle, n_, -n_) * back_;
}

Mat Phi::matrix() const {
    const Field f = I_->field();
    const int nb = static_cast<int>(basis_.size());
    Mat out(f, nb, S_.dim());
    if (!nb) return out;
    Mat B = flat(basis_[0]);
    for (int b = 1; b < nb; ++b) B = Mat::hcat(B, flat(basis_[b]));
    for (int c = 0; c < S_.dim(); ++c) {
        auto x = solve(B, flat(eval(S_.reps.col(c))));
        if (!x) throw Error("Phi: image is not H0-linear");
        out.put(0, c, *x);
    }
    return out;
}

Report Phi::check() const {
    Report r("phi_n=" + std::to_string(n_));
    bool lin = true;
    for (int c = 0; c < S_.dim(); ++c) lin = lin && is_equivariant(eval(S_.reps.col(c)), X_, Y_);
    r.add("lands_in_h0_linear_maps", lin);
    if (!lin) return r;
    const int nb = static_cast<int>(basis_.size());
    r.add("square", S_.dim() == nb, {{"hom_classes", S_.dim()}, {"hom_basis", nb}});
    Mat m = matrix();
    r.add("invertible", rank(m) == nb && S_.dim() == nb);
    if (!I_->algebra()->commutative()) {
        r.not_applicable("h0_equivariant", "non-commutative algebra");
        return r;
    }
    H0Module lhs = cohomology(*H_->C, n_);
    bool eq = true;
    for (size_t a = 0; a < lhs.act.size() && eq; ++a)
        for (int c = 0; c < S_.dim() && eq; ++c)
            eq = eval(S_.reps * lhs.act[a].col(c)) == Y_.act[a] * eval(S_.reps.col(c));
    r.add("h0_equivariant", eq);
    return r;
}

Report phi_naturality_in_M(const ChainMap& u, const ModPtr& I, int n) {
    Report r("phi_natural_in_M");
    const int floor = std::min(lowest_or(*I, 0) - n - 2, -n - 1);
    auto RM = resolve(u.src, floor);
    auto RM2 = resolve(u.tgt, floor - 1);
    Phi P(RM, I, n), P2(RM2, I, n);
    auto lift = lift_through(compose(u, RM->pi), *RM, *RM2);
    if (!r.add("lift", lift.has_value())) return r;
    Mat pre = precompose(P2.hom(), P.hom(), *lift, n);
    Mat Hu = induced_on_cohomology(u, -n);
    bool ok = true;
    const Subquotient& S2 = P2.classes();
    for (int c = 0; c < S2.dim() && ok; ++c) {
        Mat z = S2.reps.col(c);
        ok = P.eval(pre * z) == P2.eval(z) * Hu;
    }
    r.add("square_commutes", ok, {{"classes", S2.dim()}});
    return r;
}

Report phi_naturality_in_I(const ModPtr& M, const ChainMap& w, int n) {
    Report r("phi_natural_in_I");
    const int lo = std::min(lowest_or(*w.src, 0), lowest_or(*w.tgt, 0));
    auto R = resolve(M, std::min(lo - n - 2, -n - 1));
    Phi PI(R, w.src, n), PJ(R, w.tgt, n);
    Mat W = postcompose(PI.hom(), PJ.hom(), w, n);
    Mat Hw = induced_on_cohomology(w, 0);
    bool ok = true;
    const Subquotient& S = PI.classes();
    for (int c = 0; c < S.dim() && ok; ++c) {
        Mat z = S.reps.col(c);
        ok = PJ.eval(W * z) == Hw * PI.eval(z);
    }
    r.add("square_commutes", ok, {{"classes", S.dim()}});
    return r;
}

Report cohdim_zero_check(const ModPtr& I, const std::vector<ModPtr>& samples) {
    Report r("cohdim_zero");
    const AlgPtr& A = I->algebra();
    for (size_t s = 0; s < samples.size(); ++s) {
        const ModPtr& M = samples[s];
        auto amp = inf_sup_amp(*M);
        if (amp.empty) continue;
        const int top = -amp.inf + 2;
        auto R = resolve(M, hom_floor(M, I, top));
        HomComplex H = hom_complex(*R, I);
        json outside = json::array(), formula = json::array();
        bool fok = true;
        for (int i = H.C->lo(); i <= top; ++i) {
            if (!H.certified(i)) continue;
            int h = hdim(*H.C, i);
            if (i < -amp.sup || i > -amp.inf) {
                if (h) outside.push_back({{"degree", i}, {"dim", h}});
                continue;
            }
            // H^i F(M) against H^0 F(H^{-i} M) = Hom(H^{-i}M, H^0 I)
            H0Module hm = cohomology(*M, -i);
            int want = hom_dim(hm, cohomology(*I, 0));
            if (want != h) {
                fok = false;
                formula.push_back({{"degree", i}, {"dim", h}, {"hom_dim", want}});
            }
        }
        (void)A;
        const std::string tag = "sample_" + std::to_string(s);
        r.add(tag + "_amplitude", outside.empty(), {{"inf", amp.inf}, {"sup", amp.sup}, {"outside", outside}});
        r.add(tag + "_h0_formula", fok, {{"mismatch", formula}});
    }
    return r;
}

Report cat_char_surjectivity(const ModPtr& I, const ChainMap& f) {
    Report r("catchar_surjective");
    const ModPtr &M = f.src, &N = f.tgt;
    if (rank(induced_on_cohomology(f, 0)) != hdim(*M, 0)) {
        r.not_applicable("hom_surjective", "H0(f) not injective");
        return r;
    }
    const int fl = lowest_or(*I, 0) - 1;
    auto RM = resolve(M, fl);
    auto RN = resolve(N, std::min(fl, RM->floor) - 1);
    auto lift = lift_through(compose(f, RM->pi), *RM, *RN);
    if (!r.add("lift", lift.has_value())) return r;
    HomComplex HN = hom_complex(*RN, I), HM = hom_complex(*RM, I);
    Mat pre = precompose(HN, HM, *lift, 0);
    Mat Z = kernel_basis(HN.C->diff(0));
    Subquotient SM = cohomology_space(*HM.C, 0);
    int rk = SM.dim() ? rank(SM.proj * pre * Z) : 0;
    r.add("hom_surjective", rk == SM.dim(), {{"rank", rk}, {"target_dim", SM.dim()}});
    return r;
}

Splitting split_mono_test(const ChainMap& f) {
    Splitting out{Report("split_mono"), std::nullopt};
    Report& r = out.report;
    const ModPtr &I = f.src, &M = f.tgt;
    if (rank(induced_on_cohomology(f, 0)) != hdim(*I, 0) || hdim(*I, 0) == 0) {
        r.not_applicable("retraction", "H0(f) not injective");
        return out;
    }
    const int fl = lowest_or(*I, 0) - 1;
    auto RI = resolve(I, fl);
    auto RM = resolve(M, std::min(fl, RI->floor) - 1);
    auto lift = lift_through(compose(f, RI->pi), *RI, *RM);
    if (!r.add("lift", lift.has_value())) return out;
    auto HM = std::make_shared<const HomComplex>(hom_complex(*RM, I));
    HomComplex HI = hom_complex(*RI, I);
    Mat pre = precompose(*HM, HI, *lift, 0);
    Mat t = map_to_hom_element(HI, RI->pi);
    auto g = solve_pair(HM->C->diff(0), pre, -HI.C->diff(-1), t);
    if (!r.add("retraction", g.has_value())) return out;
    DerivedMorphism dg{RM, I, HM, *g};
    bool id = true;
    for (int n = RI->floor + 1; n <= highest_or(*I, 0); ++n) {
        if (!hdim(*I, n)) continue;
        id = id && derived_on_cohomology(dg, n) * induced_on_cohomology(f, n) == Mat::identity(I->field(), hdim(*I, n));
    }
    r.add("identity_on_cohomology", id);
    out.g = dg;
    return out;
}

Lifted lift_morphism_through_h0(const ModPtr& I, const ModPtr& J, const Mat& fbar) {
    Lifted out{Report("lift_through_h0"), std::nullopt};
    Report& r = out.report;
    auto R = resolve(I, std::min(lowest_or(*J, 0) - 2, -1));
    Phi P(R, J, 0);
    const HomComplex& H = P.hom();
    Mat Z = kernel_basis(H.C->diff(0));
    const Field f = I->field();
    Mat T(f, fbar.rows() * fbar.cols(), Z.cols());
    for (int c = 0; c < Z.cols(); ++c) T.put(0, c, flat(P.eval(Z.col(c))));
    auto x = solve(T, flat(fbar));
    if (!r.add("exists", x.has_value())) return out;
    const int rk = rank(T);
    r.add("unique", rk == hdim(*H.C, 0), {{"rank", rk}, {"hom_h0", hdim(*H.C, 0)}});
    out.f = DerivedMorphism{R, J, P.hom_ptr(), Z * *x};
    return out;
}

// ---------------- base change ----------------

DGModule base_change(const SemiFreeResolution& R, const AlgebraMap& F) {
    const AlgPtr& B = F.tgt;
    const Field f = B->field();
    const auto& L = R.layout;
    const auto& gens = L.gens();
    const int ng = static_cast<int>(gens.size());
    if (F.src != L.algebra()) throw Error("base_change: algebra map does not start at the resolution's algebra");
    // V[t][m]: basis of F(e_t) B in degree m (full B coordinates) and a left inverse
    const int blo = B->lowest_degree();
    const int nb = static_cast<int>(L.blocks().size());
    std::vector<std::vector<Mat>> V(nb), Vi(nb);
    for (int t = 0; t < nb; ++t) {
        Mat LE = B->left_mult(F.m * L.blocks()[t].e);
        for (int m = blo; m <= 0; ++m) {
            auto [b0, b1] = B->range(m);
            Mat cols(f, B->dim(), 0);
            if (b1 > b0) {
                Mat sel(f, B->dim(), b1 - b0);
                for (int b = b0; b < b1; ++b) sel.set(b, b - b0, Scalar(f, 1));
                cols = image_basis(LE * sel);
            }
            V[t].push_back(cols);
            Vi[t].push_back(cols.cols() ? left_inverse(cols) : Mat(f, 0, B->dim()));
        }
    }
    auto span = [&](int j, int n) {
        int m = n - gens[j].deg;
        return (m < blo || m > 0) ? 0 : V[gens[j].block][m - blo].cols();
    };
    auto offset = [&](int j, int n) {
        int o = 0;
        for (int k = 0; k < j; ++k) o += span(k, n);
        return o;
    };
    if (!ng) return DGModule(B, 0, {});
    int lo = INT_MAX, hi = INT_MIN;
    for (auto& g : gens) {
        lo = std::min(lo, g.deg + blo);
        hi = std::max(hi, g.deg);
    }
    auto dim = [&](int n) { return offset(ng, n); };
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n) dims.push_back(dim(n));
    DGModule P(B, lo, dims);
    for (int n = lo; n <= hi; ++n) {
        Mat D(f, dim(n + 1), dim(n));
        for (int j = 0; j < ng; ++j) {
            const int t = gens[j].block, m = n - gens[j].deg;
            if (!span(j, n)) continue;
            const Mat& Vm = V[t][m - blo];
            if (span(j, n + 1)) D.put(offset(j, n + 1), offset(j, n), Vi[t][m + 1 - blo] * B->diff() * Vm);
            // (-1)^{|b|} b F(c) g_k for dg_j = sum c g_k
            const auto& Bt = L.block_alg(t);
            for (int k = 0; k < ng; ++k) {
                if (gens[k].block != t || !span(k, n + 1)) continue;
                int sp = L.span(k, gens[j].deg + 1);
                if (!sp) continue;
                Mat comp = rows_of(gens[j].dg, L.offset(k, gens[j].deg + 1), sp);
                if (comp.is_zero()) continue;
                auto [q0, q1] = Bt.range(gens[j].deg + 1 - gens[k].deg);
                Mat a(f, B->dim(), 1);
                for (int c = q0; c < q1; ++c)
                    if (!comp.entry_zero(c - q0, 0)) a.add_block(0, 0, F.m * L.blocks()[t].incl.col(c), comp.at(c - q0, 0));
                Mat X(f, B->dim(), Vm.cols());
                for (int v = 0; v < Vm.cols(); ++v) X.put(0, v, B->mul(Vm.col(v), a));
                D.add_block(offset(k, n + 1), offset(j, n), Vi[t][n + 1 - gens[k].deg - blo] * X, sgn(f, m));
            }
        }
        P.set_diff(n, D);
        for (int b = 0; b < B->dim(); ++b) {
            const int s = B->degree(b);
            Mat X(f, dim(n + s), dim(n));
            Mat Lb = B->left_mult_basis(b);
            for (int j = 0; j < ng; ++j) {
                const int t = gens[j].block, m = n - gens[j].deg;
                if (!span(j, n) || !span(j, n + s)) continue;
                X.put(offset(j, n + s), offset(j, n), Vi[t][m + s - blo] * Lb * V[t][m - blo]);
            }
            P.set_action(b, n, X);
        }
    }
    return P;
}

Restricted restrict_inj_along_map(const AlgebraMap& F, const ModPtr& I, int depth) {
    Restricted out;
    auto X = mp(k_dual(*I));
    auto Q = resolve(X, lowest_or(*X, 0) - depth);
    out.module = mp(k_dual(base_change(*Q, F)));
    out.exact = Q->complete;
    out.cert = is_inj_object(out.module, depth);
    if (!out.exact && out.cert.verdict == Verdict::Yes) {
        out.cert.verdict = Verdict::Undecided;
        out.cert.witness["reason"] = "resolution of the k-dual did not terminate";
    }
    return out;
}

}  // namespace dginj
