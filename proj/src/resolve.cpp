#include "dginj/resolve.hpp"

#include <algorithm>

namespace dginj {

namespace {

Scalar sgn(const Field& f, long e) { return sign_scalar(f, e % 2 != 0); }

// column block of v for rows [r0, r0+n)
Mat rows_of(const Mat& v, int r0, int n) { return v.block(r0, 0, n, v.cols()); }

}  // namespace

// ---------------- FreeLayout ----------------

FreeLayout::FreeLayout(AlgPtr A) : A_(std::move(A)), blocks_(A_->blocks()) {
    for (auto& b : blocks_) {
        std::vector<Mat> L;
        for (int a = 0; a < A_->dim(); ++a) L.push_back(b.proj * A_->left_mult_basis(a) * b.incl);
        Lb_.push_back(std::move(L));
    }
}

int FreeLayout::span(int j, int n) const { return block_alg(gens_[j].block).dim_in(n - gens_[j].deg); }

int FreeLayout::offset(int j, int n) const {
    int o = 0;
    for (int k = 0; k < j; ++k) o += span(k, n);
    return o;
}

int FreeLayout::dim(int n) const { return offset(static_cast<int>(gens_.size()), n); }

int FreeLayout::gen_index(int j) const {
    const auto& B = block_alg(gens_[j].block);
    return offset(j, gens_[j].deg) + B.unit() - B.range(0).first;
}

int FreeLayout::lo() const {
    int lo = 0;
    bool first = true;
    for (auto& g : gens_) {
        int l = g.deg + block_alg(g.block).lowest_degree();
        lo = first ? l : std::min(lo, l);
        first = false;
    }
    return lo;
}

int FreeLayout::hi() const {
    if (gens_.empty()) return -1;
    int hi = gens_[0].deg;
    for (auto& g : gens_) hi = std::max(hi, g.deg);
    return hi;
}

const Mat& FreeLayout::elem_action(int t, int c, int t2) const {
    auto key = std::make_tuple(t, c, t2);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Mat& incl = blocks_[t].incl;
    const int m = blocks_[t2].incl.cols();
    Mat X(A_->field(), m, m);
    for (int a = 0; a < A_->dim(); ++a)
        if (!incl.entry_zero(a, c)) X.add_block(0, 0, Lb_[t2][a], incl.at(a, c));
    return cache_.emplace(key, X).first->second;
}

DGModule FreeLayout::build() const {
    const Field f = A_->field();
    if (gens_.empty()) return DGModule(A_, 0, {});
    const int lo_ = lo(), hi_ = hi();
    std::vector<int> dims;
    for (int n = lo_; n <= hi_; ++n) dims.push_back(dim(n));
    DGModule P(A_, lo_, dims);
    const int ng = static_cast<int>(gens_.size());
    for (int n = lo_; n <= hi_; ++n) {
        Mat D(f, dim(n + 1), dim(n));
        for (int j = 0; j < ng; ++j) {
            const FreeGen& g = gens_[j];
            const int t = g.block;
            const auto& B = block_alg(t);
            auto [c0, c1] = B.range(n - g.deg);
            if (c0 == c1) continue;
            auto [r0, r1] = B.range(n + 1 - g.deg);
            const int oc = offset(j, n), orow = offset(j, n + 1);
            // d(c) g_j
            if (r1 > r0) D.add_block(orow, oc, B.diff().block(r0, c0, r1 - r0, c1 - c0), Scalar(f, 1));
            // (-1)^{|c|} c . dg_j, only generators of the same block occur in dg_j
            for (int k = 0; k < ng; ++k) {
                if (gens_[k].block != t) continue;
                int sp = span(k, g.deg + 1);
                if (!sp) continue;
                Mat comp = rows_of(g.dg, offset(k, g.deg + 1), sp);
                if (comp.is_zero()) continue;
                auto [q0, q1] = B.range(g.deg + 1 - gens_[k].deg);
                auto [s0, s1] = B.range(n + 1 - gens_[k].deg);
                if (s1 == s0) continue;
                const int ok = offset(k, n + 1);
                for (int c = c0; c < c1; ++c) {
                    Mat X = elem_action(t, c, t).block(s0, q0, s1 - s0, q1 - q0) * comp;
                    D.add_block(ok, oc + c - c0, X, sgn(f, B.degree(c)));
                }
            }
        }
        P.set_diff(n, D);
        for (int a = 0; a < A_->dim(); ++a) {
            const int s = A_->degree(a);
            Mat X(f, dim(n + s), dim(n));
            for (int j = 0; j < ng; ++j) {
                const auto& B = block_alg(gens_[j].block);
                auto [c0, c1] = B.range(n - gens_[j].deg);
                auto [r0, r1] = B.range(n + s - gens_[j].deg);
                if (c0 == c1 || r0 == r1) continue;
                X.put(offset(j, n + s), offset(j, n), Lb_[gens_[j].block][a].block(r0, c0, r1 - r0, c1 - c0));
            }
            P.set_action(a, n, X);
        }
    }
    return P;
}

ChainMap FreeLayout::projection(const ModPtr& P, const ModPtr& T) const {
    ChainMap pi = make_chain_map(P, T);
    const Field f = A_->field();
    for (int n = P->lo(); n <= P->hi(); ++n) {
        Mat m(f, T->dim(n), P->dim(n));
        for (int j = 0; j < static_cast<int>(gens_.size()); ++j) {
            const FreeGen& g = gens_[j];
            const auto& B = block_alg(g.block);
            auto [c0, c1] = B.range(n - g.deg);
            const int oc = offset(j, n);
            for (int c = c0; c < c1; ++c) {
                Mat x = blocks_[g.block].incl.col(c);
                m.put(0, oc + c - c0, T->action_elem(x, B.degree(c), g.deg) * g.image);
            }
        }
        pi.set(n, m);
    }
    return pi;
}

// ---------------- resolutions ----------------

std::map<int, int, std::greater<int>> SemiFreeResolution::generator_counts() const {
    std::map<int, int, std::greater<int>> out;
    for (auto& g : layout.gens()) ++out[g.deg];
    return out;
}

SemiFreeResolution semifree_resolve(const ModPtr& M, int floor, bool minimal) {
    const AlgPtr& A = M->algebra();
    SemiFreeResolution R;
    R.target = M;
    R.floor = floor;
    R.layout = FreeLayout(A);
    Amplitude amp = inf_sup_amp(*M);
    if (!amp.empty && floor > amp.inf)
        throw Error("resolve: floor " + std::to_string(floor) + " above inf " + std::to_string(amp.inf));
    std::shared_ptr<DGModule> C;
    auto rebuild = [&] {
        R.P = std::make_shared<DGModule>(R.layout.build());
        R.pi = R.layout.projection(R.P, M);
        C = std::make_shared<DGModule>(cone(R.pi));
    };
    rebuild();
    const auto& blocks = R.layout.blocks();
    auto [a0, a1] = A->range(0);
    const int top = amp.empty ? floor - 1 : amp.sup;
    for (int n = top; n >= floor; --n) {
        Mat Z = kernel_basis(C->diff(n));
        if (Z.cols() == 0) continue;
        Mat span = image_basis(C->diff(n - 1));
        if (span.cols() == Z.cols()) continue;
        if (minimal) {
            const Mat& rad = A->radical_lift();
            Mat extra = span;
            for (int r = 0; r < rad.cols(); ++r) extra = Mat::hcat(extra, C->action_elem(rad.col(r), 0, n) * Z);
            span = image_basis(extra);
        }
        std::vector<std::pair<Mat, int>> chosen;
        for (int t = 0; t < static_cast<int>(blocks.size()); ++t) {
            Mat Et = C->action_elem(blocks[t].e, 0, n);
            for (int z = 0; z < Z.cols(); ++z) {
                Mat v = Et * Z.col(z);
                if (v.is_zero() || in_span(span, v)) continue;
                chosen.push_back({v, t});
                Mat orbit = v;
                if (minimal)
                    for (int a = a0; a < a1; ++a) orbit = Mat::hcat(orbit, C->action(a, n) * v);
                span = image_basis(Mat::hcat(span, orbit));
            }
        }
        const int p1 = R.P->dim(n + 1), mn = M->dim(n);
        for (auto& [v, t] : chosen) {
            FreeGen g;
            g.deg = n;
            g.block = t;
            g.dg = -rows_of(v, 0, p1);
            g.image = rows_of(v, p1, mn);
            R.layout.gens().push_back(g);
        }
        if (R.generators() > kMaxGenerators) throw Error("resolve: generator cap exceeded");
        rebuild();
        if (hdim(*C, n) != 0) throw Error("resolve: internal: degree " + std::to_string(n) + " not killed");
        if (!amp.empty && n <= amp.inf && is_acyclic(*C)) break;
    }
    R.complete = is_acyclic(*C);
    return R;
}

Report certify(const SemiFreeResolution& R) {
    Report r("resolution-certificate");
    DGModule C = cone(R.pi);
    int hi = std::max(C.hi(), R.floor);
    json bad = json::array();
    for (int n = R.floor; n <= hi; ++n)
        if (hdim(C, n)) bad.push_back(n);
    r.add("cone_acyclic_above_floor", bad.empty(), bad.empty() ? json::object() : json{{"degrees", bad}});
    r.add("pi_chain_map", validate(R.pi).ok());
    r.add("P_valid", validate(*R.P).ok());
    if (R.complete) r.add("complete", is_acyclic(C));
    return r;
}

// ---------------- Hom and tensor ----------------

namespace {

// memoized action of block basis elements on the cut modules
struct CutActions {
    const FreeLayout& L;
    const std::vector<Cut>& cuts;
    std::map<std::tuple<int, int, int>, Mat> memo;
    const Mat& get(int t, int c, int n) {
        auto key = std::make_tuple(t, c, n);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const auto& B = L.block_alg(t);
        Mat X = cuts[t].module->action_elem(L.blocks()[t].incl.col(c), B.degree(c), n);
        return memo.emplace(key, X).first->second;
    }
};

std::vector<Cut> cut_all(const FreeLayout& L, const ModPtr& N) {
    std::vector<Cut> cuts;
    for (auto& b : L.blocks()) {
        if (L.blocks().size() == 1) {
            cuts.push_back({N, identity_map(N), identity_map(N)});
        } else {
            cuts.push_back(cut_module(N, b.e));
        }
    }
    return cuts;
}

AlgPtr coefficient_algebra(const AlgPtr& A) { return A->commutative() ? A : DGAlgebra::field_algebra(A->field()); }

}  // namespace

int HomComplex::offset(int j, int i) const {
    int o = 0;
    for (int k = 0; k < j; ++k) o += cuts[layout.gens()[k].block].module->dim(layout.gens()[k].deg + i);
    return o;
}

HomComplex hom_complex(const SemiFreeResolution& R, const ModPtr& N) {
    HomComplex H;
    H.layout = R.layout;
    H.P = R.P;
    H.N = N;
    const auto& L = H.layout;
    const AlgPtr& A = L.algebra();
    const Field f = A->field();
    AlgPtr K = coefficient_algebra(A);
    H.certified_hi = (R.complete || N->is_zero_space()) ? INT_MAX : N->lowest_nonzero() - R.floor - 1;
    H.cuts = cut_all(L, N);
    const auto& gens = L.gens();
    const int ng = static_cast<int>(gens.size());
    if (ng == 0 || N->is_zero_space()) {
        H.C = std::make_shared<DGModule>(K, 0, std::vector<int>{});
        return H;
    }
    int lo = INT_MAX, hi = INT_MIN;
    for (auto& g : gens) {
        const auto& Nt = *H.cuts[g.block].module;
        lo = std::min(lo, Nt.lo() - g.deg);
        hi = std::max(hi, Nt.hi() - g.deg);
    }
    auto dimC = [&](int i) { return H.offset(ng, i); };
    std::vector<int> dims;
    for (int i = lo; i <= hi; ++i) dims.push_back(dimC(i));
    auto C = std::make_shared<DGModule>(K, lo, dims);
    CutActions act{L, H.cuts, {}};
    for (int i = lo; i <= hi; ++i) {
        Mat D(f, dimC(i + 1), dimC(i));
        for (int j = 0; j < ng; ++j) {
            const FreeGen& g = gens[j];
            const int t = g.block;
            const auto& Nt = *H.cuts[t].module;
            const int orow = H.offset(j, i + 1);
            if (Nt.dim(g.deg + i + 1) && Nt.dim(g.deg + i)) D.add_block(orow, H.offset(j, i), Nt.diff(g.deg + i), Scalar(f, 1));
            if (!Nt.dim(g.deg + i + 1)) continue;
            // -(-1)^i phi(dg_j), phi(c g_k) = (-1)^{|c| i} c phi(g_k)
            const auto& B = L.block_alg(t);
            for (int k = 0; k < ng; ++k) {
                if (gens[k].block != t) continue;
                int sp = L.span(k, g.deg + 1);
                if (!sp || !Nt.dim(gens[k].deg + i)) continue;
                Mat comp = rows_of(g.dg, L.offset(k, g.deg + 1), sp);
                auto [q0, q1] = B.range(g.deg + 1 - gens[k].deg);
                const int ocol = H.offset(k, i);
                for (int c = q0; c < q1; ++c) {
                    if (comp.entry_zero(c - q0, 0)) continue;
                    Scalar coef = comp.at(c - q0, 0) * sgn(f, 1 + i + static_cast<long>(B.degree(c)) * i);
                    D.add_block(orow, ocol, act.get(t, c, gens[k].deg + i), coef);
                }
            }
        }
        C->set_diff(i, D);
        if (K == A) {
            for (int a = 0; a < A->dim(); ++a) {
                const int s = A->degree(a);
                Mat X(f, dimC(i + s), dimC(i));
                for (int j = 0; j < ng; ++j) {
                    const auto& Nt = *H.cuts[gens[j].block].module;
                    int e = gens[j].deg + i;
                    if (Nt.dim(e) && Nt.dim(e + s)) X.put(H.offset(j, i + s), H.offset(j, i), Nt.action(a, e));
                }
                C->set_action(a, i, X);
            }
        }
    }
    H.C = C;
    return H;
}

ChainMap hom_cycle_to_map(const HomComplex& H, const Mat& phi) {
    const auto& L = H.layout;
    const Field f = L.algebra()->field();
    ChainMap m = make_chain_map(H.P, H.N);
    const auto& gens = L.gens();
    std::vector<Mat> img;
    for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
        const Cut& cut = H.cuts[gens[j].block];
        int d = cut.module->dim(gens[j].deg);
        Mat local = d ? rows_of(phi, H.offset(j, 0), d) : Mat(f, 0, 1);
        img.push_back(cut.incl.at(gens[j].deg) * local);
    }
    for (int n = H.P->lo(); n <= H.P->hi(); ++n) {
        Mat X(f, H.N->dim(n), H.P->dim(n));
        for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
            const auto& B = L.block_alg(gens[j].block);
            auto [c0, c1] = B.range(n - gens[j].deg);
            const int oc = L.offset(j, n);
            for (int c = c0; c < c1; ++c)
                X.put(0, oc + c - c0, H.N->action_elem(L.blocks()[gens[j].block].incl.col(c), B.degree(c), gens[j].deg) * img[j]);
        }
        m.set(n, X);
    }
    return m;
}

Mat map_to_hom_element(const HomComplex& H, const ChainMap& m) {
    const auto& L = H.layout;
    const Field f = L.algebra()->field();
    Mat phi(f, H.C->dim(0), 1);
    for (int j = 0; j < static_cast<int>(L.gens().size()); ++j) {
        const FreeGen& g = L.gens()[j];
        const Cut& cut = H.cuts[g.block];
        if (!cut.module->dim(g.deg)) continue;
        Mat v = m.at(g.deg).col(L.gen_index(j));
        phi.put(H.offset(j, 0), 0, cut.proj.at(g.deg) * v);
    }
    return phi;
}

int TensorComplex::offset(int j, int n) const {
    int o = 0;
    for (int k = 0; k < j; ++k) o += cuts[layout.gens()[k].block].module->dim(n - layout.gens()[k].deg);
    return o;
}

TensorComplex tensor_complex(const SemiFreeResolution& R, const ModPtr& N) {
    TensorComplex T;
    T.layout = R.layout;
    T.P = R.P;
    T.N = N;
    const auto& L = T.layout;
    const AlgPtr& A = L.algebra();
    if (!A->commutative()) throw Unsupported("tensor products need a graded-commutative algebra");
    const Field f = A->field();
    T.certified_lo = (R.complete || N->is_zero_space()) ? INT_MIN : R.floor + N->highest_nonzero() + 1;
    T.cuts = cut_all(L, N);
    const auto& gens = L.gens();
    const int ng = static_cast<int>(gens.size());
    if (ng == 0 || N->is_zero_space()) {
        T.C = std::make_shared<DGModule>(A, 0, std::vector<int>{});
        return T;
    }
    int lo = INT_MAX, hi = INT_MIN;
    for (auto& g : gens) {
        const auto& Nt = *T.cuts[g.block].module;
        lo = std::min(lo, Nt.lo() + g.deg);
        hi = std::max(hi, Nt.hi() + g.deg);
    }
    auto dimC = [&](int n) { return T.offset(ng, n); };
    std::vector<int> dims;
    for (int n = lo; n <= hi; ++n) dims.push_back(dimC(n));
    auto C = std::make_shared<DGModule>(A, lo, dims);
    CutActions act{L, T.cuts, {}};
    for (int n = lo; n <= hi; ++n) {
        Mat D(f, dimC(n + 1), dimC(n));
        for (int j = 0; j < ng; ++j) {
            const FreeGen& g = gens[j];
            const int t = g.block;
            const auto& Nt = *T.cuts[t].module;
            const int x = n - g.deg;
            if (!Nt.dim(x)) continue;
            const int ocol = T.offset(j, n);
            if (Nt.dim(x + 1)) D.add_block(T.offset(j, n + 1), ocol, Nt.diff(x), sgn(f, g.deg));
            // g_j . c  tensor x  ->  (-1)^{|c| e_k} g_k tensor c x
            const auto& B = L.block_alg(t);
            for (int k = 0; k < ng; ++k) {
                if (gens[k].block != t) continue;
                int sp = L.span(k, g.deg + 1);
                if (!sp || !Nt.dim(n + 1 - gens[k].deg)) continue;
                Mat comp = rows_of(g.dg, L.offset(k, g.deg + 1), sp);
                auto [q0, q1] = B.range(g.deg + 1 - gens[k].deg);
                const int orow = T.offset(k, n + 1);
                for (int c = q0; c < q1; ++c) {
                    if (comp.entry_zero(c - q0, 0)) continue;
                    Scalar coef = comp.at(c - q0, 0) * sgn(f, static_cast<long>(B.degree(c)) * gens[k].deg);
                    D.add_block(orow, ocol, act.get(t, c, x), coef);
                }
            }
        }
        C->set_diff(n, D);
        for (int a = 0; a < A->dim(); ++a) {
            const int s = A->degree(a);
            Mat X(f, dimC(n + s), dimC(n));
            for (int j = 0; j < ng; ++j) {
                const auto& Nt = *T.cuts[gens[j].block].module;
                int x = n - gens[j].deg;
                if (Nt.dim(x) && Nt.dim(x + s)) X.put(T.offset(j, n + s), T.offset(j, n), Nt.action(a, x).scaled(sgn(f, static_cast<long>(s) * gens[j].deg)));
            }
            C->set_action(a, n, X);
        }
    }
    T.C = C;
    return T;
}

// ---------------- over H^0 ----------------

std::vector<int> MinimalFreeResolution::betti() const {
    std::vector<int> b;
    for (auto& g : gens) b.push_back(static_cast<int>(g.size()));
    return b;
}

namespace {

Mat act_on(const std::vector<Mat>& act, const Mat& x, const Field& f, int dim) {
    Mat out(f, dim, dim);
    for (int i = 0; i < x.rows(); ++i)
        if (!x.entry_zero(i, 0)) out.add_block(0, 0, act[i], x.at(i, 0));
    return out;
}

}  // namespace

MinimalFreeResolution minimal_free_resolution(const H0Module& M, int length) {
    const auto& R = *M.ring;
    const Field f = R.field;
    MinimalFreeResolution F;
    F.module = M;
    F.idempotents = R.commutative ? primitive_idempotents(R) : std::vector<Mat>{R.unit};
    Mat J = radical(R);
    std::vector<CutRing> pieces;
    for (auto& e : F.idempotents) pieces.push_back(cut_ring(R, e));

    std::vector<Mat> actV = M.act;
    int dimV = M.dim;
    Mat K = Mat::identity(f, dimV);
    for (int step = 0; step <= length; ++step) {
        if (K.cols() == 0) {
            F.finite = true;
            break;
        }
        if (step == length) break;
        Mat rad(f, dimV, 0);
        for (int r = 0; r < J.cols(); ++r) rad = Mat::hcat(rad, act_on(actV, J.col(r), f, dimV) * K);
        Mat span = image_basis(rad);
        std::vector<std::pair<Mat, int>> chosen;
        for (int t = 0; t < static_cast<int>(pieces.size()); ++t) {
            Mat Et = act_on(actV, F.idempotents[t], f, dimV);
            for (int z = 0; z < K.cols(); ++z) {
                Mat v = Et * K.col(z);
                if (v.is_zero() || in_span(span, v)) continue;
                chosen.push_back({v, t});
                Mat orbit = v;
                for (int r = 0; r < R.dim; ++r) orbit = Mat::hcat(orbit, actV[r] * v);
                span = image_basis(Mat::hcat(span, orbit));
            }
        }
        int dimF = 0;
        for (auto& [v, t] : chosen) dimF += pieces[t].incl.cols();
        Mat D(f, dimV, dimF);
        std::vector<int> blocks;
        int col = 0;
        for (auto& [v, t] : chosen) {
            blocks.push_back(t);
            const Mat& inc = pieces[t].incl;
            for (int c = 0; c < inc.cols(); ++c) D.put(0, col++, act_on(actV, inc.col(c), f, dimV) * v);
        }
        F.gens.push_back(blocks);
        F.maps.push_back(D);
        // next stage: kernel inside the free module, with its block-diagonal action
        std::vector<Mat> actF;
        for (int r = 0; r < R.dim; ++r) {
            Mat X(f, dimF, dimF);
            int o = 0;
            for (int t : blocks) {
                const auto& P = pieces[t];
                X.put(o, o, P.proj * R.L[r] * P.incl);
                o += P.incl.cols();
            }
            actF.push_back(X);
        }
        actV = actF;
        dimV = dimF;
        K = kernel_basis(D);
    }
    return F;
}

Report validate(const MinimalFreeResolution& F) {
    Report r("minimal-free-resolution");
    const auto& R = *F.module.ring;
    const Field f = R.field;
    Mat J = radical(R);
    bool composed = true, minimal = true;
    for (size_t i = 0; i + 1 < F.maps.size(); ++i) composed = composed && (F.maps[i] * F.maps[i + 1]).is_zero();
    r.add("composition_zero", composed);
    if (!F.maps.empty()) r.add("surjective_onto_module", rank(F.maps[0]) == F.module.dim);
    else r.add("zero_module", F.module.dim == 0);
    // entries in the radical: image of F_i lies in J F_{i-1}
    std::vector<CutRing> pieces;
    for (auto& e : F.idempotents) pieces.push_back(cut_ring(R, e));
    for (size_t i = 1; i < F.maps.size(); ++i) {
        int dimF = F.maps[i].rows();
        Mat JF(f, dimF, 0);
        int o = 0;
        for (int t : F.gens[i - 1]) {
            const auto& P = pieces[t];
            for (int q = 0; q < J.cols(); ++q) {
                Mat X(f, dimF, P.incl.cols());
                X.put(o, 0, P.proj * R.left(J.col(q)) * P.incl);
                JF = Mat::hcat(JF, X);
            }
            o += P.incl.cols();
        }
        Mat img = image_basis(F.maps[i]);
        for (int c = 0; c < img.cols(); ++c) minimal = minimal && in_span(JF, img.col(c));
    }
    r.add("minimal", minimal);
    if (F.finite && !F.maps.empty()) r.add("last_injective", kernel_basis(F.maps.back()).cols() == 0);
    return r;
}

H0Module matlis_dual(const H0Module& M) {
    H0Module D{M.ring, M.dim, {}};
    for (auto& a : M.act) D.act.push_back(a.transpose());
    return D;
}

bool is_projective(const H0Module& M) {
    if (M.dim == 0) return true;
    auto F = minimal_free_resolution(M, 1);
    return F.finite && F.gens.size() == 1;
}

bool is_injective(const H0Module& M) { return is_projective(matlis_dual(M)); }

}  // namespace dginj
