#include "dginj/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace dginj {

// ---------------- ArtinianRing ----------------

Mat ArtinianRing::basis_vec(int i) const {
    Mat v(field, dim, 1);
    v.set(i, 0, 1);
    return v;
}

Mat ArtinianRing::left(const Mat& x) const {
    Mat out(field, dim, dim);
    for (int i = 0; i < dim; ++i)
        if (!x.entry_zero(i, 0)) out.add_block(0, 0, L[i], x.at(i, 0));
    return out;
}

Mat ArtinianRing::right(const Mat& x) const {
    // column j of right-mult = b_j * x = L_j x
    Mat out(field, dim, dim);
    for (int j = 0; j < dim; ++j) out.put(0, j, L[j] * x);
    return out;
}

Mat ArtinianRing::mul(const Mat& x, const Mat& y) const { return left(x) * y; }

namespace {

Mat ring_pow(const ArtinianRing& R, Mat x, mpz_class e) {
    Mat r = R.unit;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = R.mul(r, x);
        x = R.mul(x, x);
        e >>= 1;
    }
    return r;
}

}  // namespace

Mat radical(const ArtinianRing& R) {
    const Field f = R.field;
    const int n = R.dim;
    if (n == 0) return Mat(f, 0, 0);
    uint32_t ch = f.characteristic();
    if (ch == 0 || ch > static_cast<uint32_t>(n)) {
        // trace form: its kernel is a nil ideal, hence the radical
        Mat T(f, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Mat P = R.L[i] * R.L[j];
                Scalar t(f, 0);
                for (int k = 0; k < n; ++k) t += P.at(k, k);
                T.set(i, j, t);
            }
        return kernel_basis(T.transpose());
    }
    if (!R.commutative) throw Unsupported("radical of a non-commutative ring in small characteristic");
    // x -> x^(p^m) is additive; its kernel is the nilradical once p^m >= n
    mpz_class q = ch;
    while (q < n) q *= ch;
    Mat F(f, n, n);
    for (int i = 0; i < n; ++i) F.put(0, i, ring_pow(R, R.basis_vec(i), q));
    return kernel_basis(F);
}

namespace {

struct SemisimpleQuotient {
    const ArtinianRing* R;
    Subquotient sq;
    Mat mul(const Mat& u, const Mat& v) const { return sq.proj * R->mul(sq.reps * u, sq.reps * v); }
    int dim() const { return sq.dim(); }
};

// minimal polynomial of y inside the algebra with unit e
Poly element_minpoly(const SemisimpleQuotient& S, const Mat& e, const Mat& y) {
    Field f = e.field();
    Mat powers(f, e.rows(), 0);
    Mat cur = e;
    for (int k = 0; k <= S.dim() + 1; ++k) {
        auto c = solve(powers, cur);
        if (c) {
            Poly p(k + 1, Scalar(f, 0));
            for (int i = 0; i < k; ++i) p[i] = -c->at(i, 0);
            p[k] = Scalar(f, 1);
            return p;
        }
        powers = Mat::hcat(powers, cur);
        cur = S.mul(cur, y);
    }
    throw Error("element minimal polynomial did not terminate");
}

Mat eval_in(const SemisimpleQuotient& S, const Poly& p, const Mat& e, const Mat& y) {
    Mat r = Mat(e.field(), e.rows(), 1);
    for (size_t i = p.size(); i-- > 0;) r = S.mul(r, y) + e.scaled(p[i]);
    return r;
}

bool vec_less(const Mat& a, const Mat& b) {
    auto first = [](const Mat& v) {
        for (int i = 0; i < v.rows(); ++i)
            if (!v.entry_zero(i, 0)) return i;
        return v.rows();
    };
    int fa = first(a), fb = first(b);
    if (fa != fb) return fa < fb;
    for (int i = 0; i < a.rows(); ++i) {
        Scalar x = a.at(i, 0), y = b.at(i, 0);
        if (x == y) continue;
        if (x.field().is_q()) return x.rational() < y.rational();
        return x.residue() < y.residue();
    }
    return false;
}

}  // namespace

std::vector<Mat> primitive_idempotents(const ArtinianRing& R) {
    if (!R.commutative) throw Unsupported("idempotent decomposition needs a commutative ring");
    const Field f = R.field;
    if (R.dim == 0) return {};
    Mat J = radical(R);
    SemisimpleQuotient S{&R, subquotient(Mat::identity(f, R.dim), J, f, R.dim)};
    const int s = S.dim();
    Mat one = S.sq.proj * R.unit;

    // candidate splitting elements; over F_p use the split subalgebra {u : u^p = u}
    Mat cand = Mat::identity(f, s);
    if (!f.is_q()) {
        Mat F(f, s, s);
        for (int i = 0; i < s; ++i) {
            Mat x = Mat(f, s, 1);
            x.set(i, 0, 1);
            Mat r = one, b = x;
            uint64_t e = f.p;
            while (e) {
                if (e & 1) r = S.mul(r, b);
                b = S.mul(b, b);
                e >>= 1;
            }
            F.put(0, i, r);
        }
        cand = kernel_basis(F - Mat::identity(f, s));
    }

    std::vector<Mat> pieces{one};
    bool changed = true;
    while (changed) {
        changed = false;
        for (int c = 0; c < cand.cols() && !changed; ++c) {
            for (size_t pi = 0; pi < pieces.size() && !changed; ++pi) {
                const Mat& e = pieces[pi];
                Mat y = S.mul(e, cand.col(c));
                Poly mp = element_minpoly(S, e, y);
                auto roots = poly_roots(mp, f);
                if (roots.empty() || (roots.size() == 1 && mp.size() == 2)) continue;
                std::vector<Mat> split;
                Mat rest = e;
                for (auto& lam : roots) {
                    // cofactor g = mp / (x - lam)
                    Poly g(mp.size() - 1, Scalar(f, 0));
                    Scalar carry(f, 0);
                    for (size_t k = mp.size() - 1; k-- > 0;) {
                        g[k] = mp[k + 1] + carry;
                        carry = g[k] * lam;
                    }
                    Mat el = eval_in(S, g, e, y).scaled(poly_eval(g, lam).inv());
                    split.push_back(el);
                    rest = rest - el;
                }
                if (!rest.is_zero()) split.push_back(rest);
                if (split.size() < 2) continue;
                pieces.erase(pieces.begin() + static_cast<long>(pi));
                pieces.insert(pieces.end(), split.begin(), split.end());
                changed = true;
            }
        }
    }
    for (auto& e : pieces) {
        Mat span(f, s, 0);
        for (int c = 0; c < cand.cols(); ++c) span = Mat::hcat(span, S.mul(e, cand.col(c)));
        if (rank(span) != 1) throw Unsupported("residue field is not split over " + f.name());
    }
    // lift through the nilpotent radical: e <- 3e^2 - 2e^3
    std::vector<Mat> out;
    for (auto& e0 : pieces) {
        Mat e = S.sq.reps * e0;
        for (int it = 0;; ++it) {
            Mat e2 = R.mul(e, e);
            if (e2 == e) break;
            if (it > 64) throw Error("idempotent lift did not converge");
            e = e2.scaled(Scalar(f, 3)) - R.mul(e2, e).scaled(Scalar(f, 2));
        }
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), vec_less);
    return out;
}

CutRing cut_ring(const ArtinianRing& R, const Mat& e) {
    Mat Le = R.left(e);
    Mat incl = Mat::hcat(e, extend_basis(e, Le));
    Mat proj = left_inverse(incl) * Le;
    auto r = std::make_shared<ArtinianRing>();
    r->field = R.field;
    r->dim = incl.cols();
    r->commutative = R.commutative;
    r->unit = proj * e;
    for (int i = 0; i < r->dim; ++i) r->L.push_back(proj * R.left(incl.col(i)) * incl);
    return {r, incl, proj};
}

// ---------------- DGAlgebra ----------------

struct DGAlgebra::Cache {
    std::once_flag h0_once, blocks_once, rad_once;
    H0Data h0;
    std::vector<Block> blocks;
    Mat rad;
};

AlgPtr DGAlgebra::make(Input in) {
    const int n = static_cast<int>(in.labels.size());
    if (static_cast<int>(in.degrees.size()) != n) throw Error("algebra: label/degree count mismatch");
    if (n == 0) throw Error("algebra: no unit (empty basis)");
    if (n > kMaxTotalDim) throw Error("algebra: total dimension exceeds cap");
    for (int d : in.degrees)
        if (d > 0 || d < kMinDegree) throw Error("algebra: degree " + std::to_string(d) + " outside [-8,0]");
    if (in.unit < 0 || in.unit >= n || in.degrees[in.unit] != 0) throw Error("algebra: unit must be a degree-0 basis element");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return in.degrees[a] > in.degrees[b]; });
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;

    auto A = std::make_shared<DGAlgebra>();
    A->field_ = in.field;
    A->name_ = in.name;
    A->comm_ = in.commutative;
    A->unit_ = pos[in.unit];
    for (int i = 0; i < n; ++i) {
        A->labels_.push_back(in.labels[order[i]]);
        A->deg_.push_back(in.degrees[order[i]]);
    }
    A->mult_.assign(static_cast<size_t>(n) * n, {});
    std::vector<char> given(static_cast<size_t>(n) * n, 0);
    auto put = [&](int a, int b, const std::vector<Term>& ts, const Scalar& sgn) {
        std::map<int, Scalar> acc;
        for (auto& t : ts) {
            if (t.idx < 0 || t.idx >= n) throw Error("algebra: product term out of range");
            auto it = acc.find(pos[t.idx]);
            if (it == acc.end())
                acc.emplace(pos[t.idx], t.c * sgn);
            else
                it->second += t.c * sgn;
        }
        auto& dst = A->mult_[static_cast<size_t>(a) * n + b];
        dst.clear();
        for (auto& [i, c] : acc)
            if (!c.is_zero()) dst.push_back({i, c});
        given[static_cast<size_t>(a) * n + b] = 1;
    };
    for (auto& [ab, ts] : in.mult) {
        if (ab.first < 0 || ab.first >= n || ab.second < 0 || ab.second >= n) throw Error("algebra: product index out of range");
        put(pos[ab.first], pos[ab.second], ts, Scalar(in.field, 1));
    }
    // unit products are implicit
    const int u = A->unit_;
    for (int a = 0; a < n; ++a) {
        if (!given[static_cast<size_t>(u) * n + a]) put(u, a, {{order[a], Scalar(in.field, 1)}}, Scalar(in.field, 1));
        if (!given[static_cast<size_t>(a) * n + u]) put(a, u, {{order[a], Scalar(in.field, 1)}}, Scalar(in.field, 1));
    }
    if (in.commutative) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                size_t ab = static_cast<size_t>(a) * n + b, ba = static_cast<size_t>(b) * n + a;
                if (given[ab] && !given[ba]) {
                    bool neg = (A->deg_[a] * A->deg_[b]) % 2 != 0;
                    std::vector<Term> ts;
                    for (auto& t : A->mult_[ab]) ts.push_back({order[t.idx], t.c});
                    put(b, a, ts, Scalar(in.field, neg ? -1 : 1));
                }
            }
    }
    A->d_ = Mat(in.field, n, n);
    for (auto& [a, ts] : in.diff) {
        if (a < 0 || a >= n) throw Error("algebra: differential index out of range");
        for (auto& t : ts) {
            if (t.idx < 0 || t.idx >= n) throw Error("algebra: differential term out of range");
            A->d_.add_to(pos[t.idx], pos[a], t.c);
        }
    }
    A->cache_ = std::make_shared<Cache>();
    A->self_ = A;
    return A;
}

AlgPtr DGAlgebra::field_algebra(Field f) {
    Input in;
    in.field = f;
    in.name = "k";
    in.labels = {"1"};
    in.degrees = {0};
    in.commutative = true;
    return make(in);
}

DGAlgebra::Input DGAlgebra::to_input() const {
    Input in;
    in.field = field_;
    in.name = name_;
    in.labels = labels_;
    in.degrees = deg_;
    in.unit = unit_;
    in.commutative = comm_;
    const int n = dim();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != unit_ && b != unit_ && !mult(a, b).empty()) in.mult.push_back({{a, b}, mult(a, b)});
    for (int a = 0; a < n; ++a) {
        std::vector<Term> ts;
        for (int i = 0; i < n; ++i)
            if (!d_.entry_zero(i, a)) ts.push_back({i, d_.at(i, a)});
        if (!ts.empty()) in.diff.push_back({a, ts});
    }
    return in;
}

int DGAlgebra::label_index(const std::string& l) const {
    for (int i = 0; i < dim(); ++i)
        if (labels_[i] == l) return i;
    return -1;
}

int DGAlgebra::lowest_degree() const { return *std::min_element(deg_.begin(), deg_.end()); }

std::pair<int, int> DGAlgebra::range(int n) const {
    int b = 0;
    while (b < dim() && deg_[b] > n) ++b;
    int e = b;
    while (e < dim() && deg_[e] == n) ++e;
    return {b, e};
}

Mat DGAlgebra::basis_vec(int i) const {
    Mat v(field_, dim(), 1);
    v.set(i, 0, 1);
    return v;
}

Mat DGAlgebra::left_mult_basis(int a) const {
    Mat L(field_, dim(), dim());
    for (int b = 0; b < dim(); ++b)
        for (auto& t : mult(a, b)) L.add_to(t.idx, b, t.c);
    return L;
}

Mat DGAlgebra::left_mult(const Mat& x) const {
    Mat L(field_, dim(), dim());
    for (int a = 0; a < dim(); ++a) {
        if (x.entry_zero(a, 0)) continue;
        Scalar ca = x.at(a, 0);
        for (int b = 0; b < dim(); ++b)
            for (auto& t : mult(a, b)) L.add_to(t.idx, b, ca * t.c);
    }
    return L;
}

Mat DGAlgebra::mul(const Mat& x, const Mat& y) const {
    Mat out(field_, dim(), 1);
    for (int a = 0; a < dim(); ++a) {
        if (x.entry_zero(a, 0)) continue;
        Scalar ca = x.at(a, 0);
        for (int b = 0; b < dim(); ++b) {
            if (y.entry_zero(b, 0)) continue;
            Scalar cab = ca * y.at(b, 0);
            for (auto& t : mult(a, b)) out.add_to(t.idx, 0, cab * t.c);
        }
    }
    return out;
}

const H0Data& DGAlgebra::h0() const {
    std::call_once(cache_->h0_once, [this] {
        auto [b0, e0] = range(0);
        auto [bm, em] = range(-1);
        const int n0 = e0 - b0;
        Mat B = d_.block(b0, bm, n0, em - bm);
        // candidate representatives: unit first, then standard order
        std::vector<int> cols{unit_ - b0};
        for (int i = 0; i < n0; ++i)
            if (i != unit_ - b0) cols.push_back(i);
        Mat Z = Mat::identity(field_, n0).select_cols(cols);
        Subquotient sq = subquotient(Z, B, field_, n0);
        const int h = sq.dim();
        H0Data& D = cache_->h0;
        D.proj = Mat(field_, h, dim());
        D.proj.put(0, b0, sq.proj);
        D.lift = Mat(field_, dim(), h);
        D.lift.put(b0, 0, sq.reps);
        auto R = std::make_shared<ArtinianRing>();
        R->field = field_;
        R->dim = h;
        R->commutative = comm_;
        R->unit = D.proj * unit_vec();
        for (int i = 0; i < h; ++i) {
            Mat Li(field_, h, h);
            for (int j = 0; j < h; ++j) Li.put(0, j, D.proj * mul(D.lift.col(i), D.lift.col(j)));
            R->L.push_back(Li);
        }
        D.ring = R;
    });
    return cache_->h0;
}

const Mat& DGAlgebra::radical_lift() const {
    std::call_once(cache_->rad_once, [this] {
        const H0Data& D = h0();
        Mat J;
        try {
            J = radical(*D.ring);
        } catch (const Unsupported&) {
            J = Mat(field_, D.ring->dim, 0);  // falls back to non-minimal generation
        }
        auto [b0, e0] = range(0);
        auto [bm, em] = range(-1);
        Mat B(field_, dim(), em - bm);
        B.put(0, 0, d_.block(0, bm, dim(), em - bm));
        cache_->rad = image_basis(Mat::hcat(D.lift * J, B));
        (void)b0;
        (void)e0;
    });
    return cache_->rad;
}

std::vector<Block> DGAlgebra::blocks() const {
    std::call_once(cache_->blocks_once, [this] {
        auto self_block = [this] {
            Block b;
            b.alg = nullptr;  // filled with the owning pointer on access
            b.e = unit_vec();
            b.incl = Mat::identity(field_, dim());
            b.proj = Mat::identity(field_, dim());
            return b;
        };
        const H0Data& D = h0();
        if (D.ring->dim == 0) return;
        if (!comm_) {
            cache_->blocks.push_back(self_block());
            return;
        }
        auto ids = primitive_idempotents(*D.ring);
        if (ids.size() == 1) {
            cache_->blocks.push_back(self_block());
            return;
        }
        int t = 0;
        for (auto& eb : ids) {
            Mat e = D.lift * eb;
            for (int it = 0;; ++it) {
                Mat e2 = mul(e, e);
                if (e2 == e) break;
                if (it > 64) throw Error("idempotent lift to A^0 did not converge");
                e = e2.scaled(Scalar(field_, 3)) - mul(e2, e).scaled(Scalar(field_, 2));
            }
            Mat Le = left_mult(e);
            Mat incl(field_, dim(), 0);
            for (int n = 0; n >= lowest_degree(); --n) {
                auto [b, en] = range(n);
                Mat cols = Le.block(0, b, dim(), en - b);
                Mat basis = n == 0 ? Mat::hcat(e, extend_basis(e, cols)) : image_basis(cols);
                incl = Mat::hcat(incl, basis);
            }
            Mat proj = left_inverse(incl) * Le;
            Input in;
            in.field = field_;
            in.name = name_ + "[" + std::to_string(t + 1) + "]";
            in.commutative = true;
            in.unit = 0;
            const int m = incl.cols();
            for (int i = 0; i < m; ++i) {
                int deg = 0, lab = -1, nz = 0;
                for (int r = 0; r < dim(); ++r)
                    if (!incl.entry_zero(r, i)) {
                        deg = deg_[r];
                        ++nz;
                        if (incl.at(r, i).is_one()) lab = r;
                    }
                in.degrees.push_back(deg);
                in.labels.push_back(nz == 1 && lab >= 0 ? labels_[lab] : (i == 0 ? "1" : "b" + std::to_string(i)));
            }
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    Mat c = proj * mul(incl.col(i), incl.col(j));
                    std::vector<Term> ts;
                    for (int r = 0; r < m; ++r)
                        if (!c.entry_zero(r, 0)) ts.push_back({r, c.at(r, 0)});
                    if (!ts.empty()) in.mult.push_back({{i, j}, ts});
                }
                Mat dc = proj * d_ * incl.col(i);
                std::vector<Term> ts;
                for (int r = 0; r < m; ++r)
                    if (!dc.entry_zero(r, 0)) ts.push_back({r, dc.at(r, 0)});
                if (!ts.empty()) in.diff.push_back({i, ts});
            }
            Block blk;
            blk.alg = make(in);
            blk.e = e;
            blk.incl = incl;
            blk.proj = proj;
            cache_->blocks.push_back(blk);
            ++t;
        }
    });
    std::vector<Block> out = cache_->blocks;
    for (auto& b : out)
        if (!b.alg) b.alg = self_.lock();
    return out;
}

// ---------------- validation ----------------

Report validate(const DGAlgebra& A) {
    Report r("validate-algebra");
    const int n = A.dim();
    const Field f = A.field();
    auto lab = [&](std::initializer_list<int> ids) {
        json j = json::array();
        for (int i : ids) j.push_back(A.label(i));
        return j;
    };
    auto record = [&](const std::string& name, int fails, json first) {
        json w = json::object();
        if (fails) {
            w["at"] = first;
            w["violations"] = fails;
        }
        r.add(name, fails == 0, w);
    };
    {
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            if (A.degree(a) > 0) {
                if (!fails++) first = lab({a});
            }
        record("nonpositive", fails, first);
    }
    const Mat& d = A.diff();
    {
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i)
                if (!d.entry_zero(i, a) && A.degree(i) != A.degree(a) + 1)
                    if (!fails++) first = lab({a});
        record("differential_degree", fails, first);
    }
    {
        Mat dd = d * d;
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            if (!dd.col(a).is_zero())
                if (!fails++) first = lab({a});
        record("d_squared", fails, first);
    }
    {
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (auto& t : A.mult(a, b))
                    if (A.degree(t.idx) != A.degree(a) + A.degree(b))
                        if (!fails++) first = lab({a, b});
        record("product_degree", fails, first);
    }
    {
        int fails = 0;
        json first;
        Mat u = A.unit_vec();
        for (int a = 0; a < n; ++a) {
            Mat ea = A.basis_vec(a);
            if (A.mul(u, ea) != ea || A.mul(ea, u) != ea)
                if (!fails++) first = lab({a});
        }
        record("unit", fails, first);
    }
    std::vector<Mat> L(n);
    for (int a = 0; a < n; ++a) L[a] = A.left_mult_basis(a);
    {
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Mat ab = L[a] * A.basis_vec(b);
                Mat Lab = A.left_mult(ab);
                Mat rhs = L[a] * L[b];
                if (Lab != rhs) {
                    for (int c = 0; c < n; ++c)
                        if (Lab.col(c) != rhs.col(c)) {
                            if (!fails++) first = lab({a, b, c});
                            break;
                        }
                }
            }
        record("associativity", fails, first);
    }
    {
        // d(ab) = d(a) b + (-1)^|a| a d(b)
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Mat ea = A.basis_vec(a), eb = A.basis_vec(b);
                Mat lhs = d * A.mul(ea, eb);
                Mat rhs = A.mul(d * ea, eb) + A.mul(ea, d * eb).scaled(sign_scalar(f, A.degree(a) % 2 != 0));
                if (lhs != rhs)
                    if (!fails++) first = lab({a, b});
            }
        record("leibniz", fails, first);
    }
    if (A.commutative()) {
        int fails = 0;
        json first;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Mat ab = L[a].col(b), ba = L[b].col(a);
                bool odd = (A.degree(a) * A.degree(b)) % 2 != 0;
                bool bad = ab != ba.scaled(sign_scalar(f, odd));
                if (a == b && A.degree(a) % 2 != 0 && !ab.is_zero()) bad = true;
                if (bad)
                    if (!fails++) first = lab({a, b});
            }
        record("graded_commutative", fails, first);
    }
    return r;
}

// ---------------- products, H^0, maps ----------------

AlgPtr product(const std::vector<AlgPtr>& factors, const std::string& name) {
    if (factors.empty()) throw Error("product of no factors");
    if (factors.size() == 1) return factors[0];
    const Field f = factors[0]->field();
    int n = 0;
    std::vector<int> off;
    bool comm = true;
    std::string nm;
    for (auto& F : factors) {
        if (F->field() != f) throw Error("product: mixed fields");
        off.push_back(n);
        n += F->dim();
        comm = comm && F->commutative();
        nm += (nm.empty() ? "" : "*") + F->name();
    }
    // old basis = disjoint union; new basis replaces the first unit by the sum of all units
    Mat P = Mat::identity(f, n);
    for (size_t i = 1; i < factors.size(); ++i) P.set(off[i] + factors[i]->unit(), off[0] + factors[0]->unit(), 1);
    Mat Pinv = *inverse(P);
    DGAlgebra::Input in;
    in.field = f;
    in.name = name.empty() ? nm : name;
    in.commutative = comm;
    in.unit = off[0] + factors[0]->unit();
    std::vector<int> owner(n), local(n);
    for (size_t i = 0; i < factors.size(); ++i)
        for (int a = 0; a < factors[i]->dim(); ++a) {
            owner[off[i] + a] = static_cast<int>(i);
            local[off[i] + a] = a;
            in.degrees.push_back(factors[i]->degree(a));
            in.labels.push_back(i == 0 ? factors[i]->label(a) : factors[i]->label(a) + "@" + std::to_string(i + 1));
        }
    auto old_mul = [&](const Mat& x, const Mat& y) {
        Mat out(f, n, 1);
        for (int a = 0; a < n; ++a) {
            if (x.entry_zero(a, 0)) continue;
            for (int b = 0; b < n; ++b) {
                if (y.entry_zero(b, 0) || owner[a] != owner[b]) continue;
                Scalar c = x.at(a, 0) * y.at(b, 0);
                for (auto& t : factors[owner[a]]->mult(local[a], local[b])) out.add_to(off[owner[a]] + t.idx, 0, c * t.c);
            }
        }
        return out;
    };
    Mat Dold(f, n, n);
    for (size_t i = 0; i < factors.size(); ++i) Dold.put(off[i], off[i], factors[i]->diff());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            Mat c = Pinv * old_mul(P.col(a), P.col(b));
            std::vector<DGAlgebra::Term> ts;
            for (int r = 0; r < n; ++r)
                if (!c.entry_zero(r, 0)) ts.push_back({r, c.at(r, 0)});
            if (!ts.empty()) in.mult.push_back({{a, b}, ts});
        }
        Mat dc = Pinv * Dold * P.col(a);
        std::vector<DGAlgebra::Term> ts;
        for (int r = 0; r < n; ++r)
            if (!dc.entry_zero(r, 0)) ts.push_back({r, dc.at(r, 0)});
        if (!ts.empty()) in.diff.push_back({a, ts});
    }
    return DGAlgebra::make(in);
}

AlgPtr h0_algebra(const AlgPtr& A) {
    const H0Data& D = A->h0();
    const auto& R = *D.ring;
    const Field f = A->field();
    DGAlgebra::Input in;
    in.field = f;
    in.name = "H0(" + A->name() + ")";
    in.commutative = A->commutative();
    in.unit = 0;
    if (R.dim == 0) throw Error("H^0 of an acyclic algebra is zero");
    for (int i = 0; i < R.dim; ++i) {
        in.degrees.push_back(0);
        int lab = -1, nz = 0;
        for (int r = 0; r < A->dim(); ++r)
            if (!D.lift.entry_zero(r, i)) {
                ++nz;
                lab = r;
            }
        in.labels.push_back(nz == 1 ? A->label(lab) : "h" + std::to_string(i));
        for (int j = 0; j < R.dim; ++j) {
            Mat c = R.L[i].col(j);
            std::vector<DGAlgebra::Term> ts;
            for (int r = 0; r < R.dim; ++r)
                if (!c.entry_zero(r, 0)) ts.push_back({r, c.at(r, 0)});
            if (!ts.empty()) in.mult.push_back({{i, j}, ts});
        }
    }
    return DGAlgebra::make(in);
}

AlgebraMap h0_projection(const AlgPtr& A) { return {A, h0_algebra(A), A->h0().proj}; }

Report validate(const AlgebraMap& F) {
    Report r("validate-algebra-map");
    const auto& A = *F.src;
    const auto& B = *F.tgt;
    if (!r.add("shape", F.m.rows() == B.dim() && F.m.cols() == A.dim())) return r;
    int fails = 0;
    json first;
    for (int a = 0; a < A.dim(); ++a)
        for (int i = 0; i < B.dim(); ++i)
            if (!F.m.entry_zero(i, a) && B.degree(i) != A.degree(a))
                if (!fails++) first = json::array({A.label(a)});
    r.add("degree", fails == 0, fails ? json{{"at", first}} : json::object());
    r.add("unit", F.m * A.unit_vec() == B.unit_vec());
    r.add("differential", F.m * A.diff() == B.diff() * F.m);
    fails = 0;
    for (int a = 0; a < A.dim(); ++a)
        for (int b = 0; b < A.dim(); ++b) {
            Mat lhs = F.m * A.mul(A.basis_vec(a), A.basis_vec(b));
            Mat rhs = B.mul(F.m.col(a), F.m.col(b));
            if (lhs != rhs)
                if (!fails++) first = json::array({A.label(a), A.label(b)});
        }
    r.add("multiplicative", fails == 0, fails ? json{{"at", first}} : json::object());
    return r;
}

}  // namespace dginj
