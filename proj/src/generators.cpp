#include "dginj/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace dginj {

namespace {

std::string mono_label(const std::vector<int>& a, bool single) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        s += single ? "x" : "x" + std::to_string(i + 1);
        if (a[i] > 1) s += single ? std::to_string(a[i]) : "^" + std::to_string(a[i]);
    }
    return s;
}

std::string ext_label(unsigned mask, int s) {
    std::string out;
    for (int j = 0; j < s; ++j)
        if (mask >> j & 1u) out += s == 1 ? "e" : "e" + std::to_string(j + 1);
    return out;
}

// sign of e_S * e_T when S and T are disjoint (count inversions)
bool ext_sign(unsigned S, unsigned T) {
    int inv = 0;
    for (int j = 0; j < 32; ++j)
        if (T >> j & 1u) inv += __builtin_popcount(S >> (j + 1));
    return inv % 2 != 0;
}

std::vector<std::string> split(const std::string& s, char c) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, c)) out.push_back(t);
    return out;
}

int to_int(const std::string& s, const std::string& ctx) {
    try {
        size_t p = 0;
        int v = std::stoi(s, &p);
        if (p != s.size()) throw Error("");
        return v;
    } catch (...) {
        throw Error("generator spec: bad integer '" + s + "' in " + ctx);
    }
}

}  // namespace

AlgPtr koszul(Field f, const KoszulSpec& ks, const std::string& name) {
    const int r = static_cast<int>(ks.exps.size());
    const int s = static_cast<int>(ks.elems.size());
    if (s > 8) throw Error("koszul: too many elements");
    // monomials of the truncated polynomial ring, graded lexicographic by index
    std::vector<std::vector<int>> monos{{}};
    for (int i = 0; i < r; ++i) {
        if (ks.exps[i] < 1) throw Error("koszul: exponent must be positive");
        std::vector<std::vector<int>> next;
        for (auto& m : monos)
            for (int k = 0; k < ks.exps[i]; ++k) {
                auto m2 = m;
                m2.push_back(k);
                next.push_back(m2);
            }
        monos = next;
    }
    std::stable_sort(monos.begin(), monos.end(), [](auto& a, auto& b) {
        int da = 0, db = 0;
        for (int x : a) da += x;
        for (int x : b) db += x;
        return da < db;
    });
    std::map<std::vector<int>, int> mono_idx;
    for (size_t i = 0; i < monos.size(); ++i) mono_idx[monos[i]] = static_cast<int>(i);
    const int nm = static_cast<int>(monos.size());
    if (static_cast<long>(nm) << s > kMaxTotalDim) throw Error("koszul: dimension exceeds cap");

    std::vector<unsigned> masks;
    for (unsigned m = 0; m < (1u << s); ++m) masks.push_back(m);
    std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
    std::map<unsigned, int> mask_pos;
    for (size_t i = 0; i < masks.size(); ++i) mask_pos[masks[i]] = static_cast<int>(i);
    auto idx = [&](int mi, unsigned mask) { return mask_pos[mask] * nm + mi; };

    DGAlgebra::Input in;
    in.field = f;
    in.name = name.empty() ? "koszul" : name;
    in.commutative = true;
    const bool single = r == 1;
    for (unsigned mask : masks)
        for (auto& m : monos) {
            std::string l = mono_label(m, single) + ext_label(mask, s);
            in.labels.push_back(l.empty() ? "1" : l);
            in.degrees.push_back(-__builtin_popcount(mask));
        }
    in.unit = idx(0, 0);

    auto mono_mul = [&](const std::vector<int>& a, const std::vector<int>& b) -> int {
        std::vector<int> c(r);
        for (int i = 0; i < r; ++i) {
            c[i] = a[i] + b[i];
            if (c[i] >= ks.exps[i]) return -1;
        }
        return mono_idx[c];
    };
    for (unsigned S : masks)
        for (unsigned T : masks) {
            if (S & T) continue;
            for (int i = 0; i < nm; ++i)
                for (int j = 0; j < nm; ++j) {
                    if ((S == 0 && i == 0) || (T == 0 && j == 0)) continue;
                    int k = mono_mul(monos[i], monos[j]);
                    if (k < 0) continue;
                    in.mult.push_back({{idx(i, S), idx(j, T)}, {{idx(k, S | T), sign_scalar(f, ext_sign(S, T))}}});
                }
        }
    // elements f_j in the monomial basis
    std::vector<std::vector<std::pair<int, Scalar>>> fel;
    for (auto& el : ks.elems) {
        std::vector<std::pair<int, Scalar>> v;
        for (auto& [ex, c] : el) {
            if (static_cast<int>(ex.size()) != r) throw Error("koszul: monomial arity mismatch");
            bool dead = false;
            for (int i = 0; i < r; ++i) dead |= ex[i] >= ks.exps[i] || ex[i] < 0;
            if (!dead) v.push_back({mono_idx[ex], Scalar(f, c)});
        }
        fel.push_back(v);
    }
    // d(x^a e_S) = sum_j (-1)^{#S below j} f_j x^a e_{S - j}
    for (unsigned S : masks) {
        if (!S) continue;
        for (int i = 0; i < nm; ++i) {
            std::map<int, Scalar> acc;
            for (int j = 0; j < s; ++j) {
                if (!(S >> j & 1u)) continue;
                bool neg = __builtin_popcount(S & ((1u << j) - 1)) % 2 != 0;
                for (auto& [mi, c] : fel[j]) {
                    int k = mono_mul(monos[i], monos[mi]);
                    if (k < 0) continue;
                    int t = idx(k, S & ~(1u << j));
                    Scalar v = neg ? -c : c;
                    auto it = acc.find(t);
                    if (it == acc.end()) acc.emplace(t, v);
                    else it->second += v;
                }
            }
            std::vector<DGAlgebra::Term> ts;
            for (auto& [t, c] : acc)
                if (!c.is_zero()) ts.push_back({t, c});
            if (!ts.empty()) in.diff.push_back({idx(i, S), ts});
        }
    }
    return DGAlgebra::make(in);
}

AlgPtr koszul_x(Field f, int n, int m) {
    if (n < 1 || m < 0) throw Error("koszul: need x^n with n >= 1 and m >= 0");
    KoszulSpec s{{n}, {{{{m}, 1}}}};
    return koszul(f, s, "koszul:x" + std::to_string(n) + ":x" + std::to_string(m));
}

AlgPtr trivial_extension(Field f, int dim, int deg) {
    if (dim < 0 || deg < 0 || deg > -kMinDegree) throw Error("trivext: need dim >= 0 and 0 <= deg <= 8");
    DGAlgebra::Input in;
    in.field = f;
    in.name = "trivext:" + std::to_string(dim) + ":" + std::to_string(deg);
    in.commutative = true;
    in.labels = {"1"};
    in.degrees = {0};
    for (int i = 0; i < dim; ++i) {
        in.labels.push_back("v" + std::to_string(i + 1));
        in.degrees.push_back(-deg);
    }
    return DGAlgebra::make(in);
}

AlgPtr random_algebra(Field f, uint64_t seed) {
    Rng rng(seed * 0x9E3779B97F4A7C15ull + 1);
    for (int attempt = 0; attempt < 100; ++attempt) {
        KoszulSpec ks;
        int r = rng.uniform(1, 2);
        int base = 1;
        for (int i = 0; i < r; ++i) {
            ks.exps.push_back(rng.uniform(2, r == 1 ? 6 : 3));
            base *= ks.exps.back();
        }
        int s = 0;
        while (s < 2 && (base << (s + 1)) <= 24 && rng.coin(70)) ++s;
        for (int j = 0; j < s; ++j) {
            std::vector<std::pair<std::vector<int>, long>> el;
            // elements of the maximal ideal: random combination of non-unit monomials
            for (int t = 0; t < 3; ++t) {
                std::vector<int> ex(r);
                int tot = 0;
                for (int i = 0; i < r; ++i) tot += ex[i] = rng.uniform(0, ks.exps[i] - 1);
                if (tot == 0) continue;
                long c = rng.uniform(-3, 3);
                if (c) el.push_back({ex, c});
            }
            if (el.empty()) el.push_back({std::vector<int>(r, 0), 0});
            ks.elems.push_back(el);
        }
        auto A = koszul(f, ks, "random:" + std::to_string(seed));
        if (A->dim() <= 24 && validate(*A).ok()) return A;
    }
    throw Error("random_algebra: no valid sample");
}

AlgPtr generate(const std::string& spec, Field f) {
    auto parts = split(spec, '*');
    if (parts.empty()) throw Error("generator spec is empty");
    std::vector<AlgPtr> fs;
    for (auto& p : parts) {
        auto t = split(p, ':');
        if (p == "k" || p == "trivial:k") {
            fs.push_back(DGAlgebra::field_algebra(f));
        } else if (t.size() == 3 && t[0] == "koszul" && t[1].size() > 1 && t[1][0] == 'x' && t[2].size() > 1 && t[2][0] == 'x') {
            fs.push_back(koszul_x(f, to_int(t[1].substr(1), p), to_int(t[2].substr(1), p)));
        } else if (t.size() == 3 && t[0] == "trivext") {
            fs.push_back(trivial_extension(f, to_int(t[1], p), to_int(t[2], p)));
        } else if (t.size() == 2 && t[0] == "random") {
            fs.push_back(random_algebra(f, static_cast<uint64_t>(to_int(t[1], p))));
        } else {
            throw Error("unknown generator '" + p + "'");
        }
    }
    if (fs.size() == 1) return fs[0];
    return product(fs, spec);
}

// ---------------- sampling ----------------

Scalar Rng::nonzero(Field f, int span) {
    for (;;) {
        Scalar s = scalar(f, span);
        if (!s.is_zero()) return s;
    }
}

Mat Rng::mat(Field f, int r, int c, int density) {
    Mat m(f, r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (coin(density)) m.set(i, j, scalar(f));
    return m;
}

ChainMap free_map(const ModPtr& N, const Mat& z, int s) {
    const auto& A = N->algebra();
    auto F = std::make_shared<DGModule>(shift(regular_module(A), s));
    ChainMap g = make_chain_map(F, N);
    const Field f = A->field();
    for (int n = F->lo(); n <= F->hi(); ++n) {
        auto [b, e] = A->range(n + s);
        Mat m(f, N->dim(n), e - b);
        for (int a = b; a < e; ++a) {
            Mat col = N->action(a, -s) * z;
            m.put(0, a - b, col.scaled(sign_scalar(f, (s * A->degree(a)) % 2 != 0)));
        }
        g.set(n, m);
    }
    return g;
}

std::vector<ChainMap> chain_map_space(const ModPtr& M, const ModPtr& N) {
    const Field f = M->field();
    const auto& A = *M->algebra();
    // unknowns: f^n entries, row-major per degree
    std::map<int, int> off;
    int nv = 0;
    for (int n = M->lo(); n <= M->hi(); ++n) {
        off[n] = nv;
        nv += N->dim(n) * M->dim(n);
    }
    auto var = [&](int n, int r, int c) { return off[n] + r * M->dim(n) + c; };
    Mat K = Mat::identity(f, nv);
    // impose one block of linear constraints on the current solution space
    auto impose = [&](const Mat& C) {
        if (C.rows() == 0 || K.cols() == 0) return;
        K = K * kernel_basis(C * K);
    };
    // the map P X_n - X_m Q = 0 with X_n : M^n -> N^n
    auto commute = [&](int n, const Mat& P, int m, const Mat& Q) {
        int rows = P.rows(), cols = Q.cols();
        if (rows == 0 || cols == 0) return;
        Mat C(f, rows * cols, nv);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                int eq = r * cols + c;
                if (M->dim(n) && N->dim(n) && n >= M->lo() && n <= M->hi())
                    for (int k = 0; k < P.cols(); ++k)
                        if (!P.entry_zero(r, k)) C.add_to(eq, var(n, k, c), P.at(r, k));
                if (M->dim(m) && N->dim(m) && m >= M->lo() && m <= M->hi())
                    for (int k = 0; k < Q.rows(); ++k)
                        if (!Q.entry_zero(k, c)) C.add_to(eq, var(m, r, k), -Q.at(k, c));
            }
        impose(C);
    };
    for (int n = M->lo() - 1; n <= M->hi(); ++n) {
        // d_N f^n = f^{n+1} d_M
        if (M->dim(n) || M->dim(n + 1)) commute(n, N->diff(n), n + 1, M->diff(n));
        for (int a = 0; a < A.dim(); ++a) {
            if (a == A.unit()) continue;
            int s = A.degree(a);
            // N(a) f^n = f^{n+s} M(a)
            if (M->dim(n)) commute(n, N->action(a, n), n + s, M->action(a, n));
        }
    }
    std::vector<ChainMap> out;
    for (int j = 0; j < K.cols(); ++j) {
        ChainMap g = make_chain_map(M, N);
        for (int n = M->lo(); n <= M->hi(); ++n) {
            Mat m(f, N->dim(n), M->dim(n));
            for (int r = 0; r < N->dim(n); ++r)
                for (int c = 0; c < M->dim(n); ++c) m.set(r, c, K.at(var(n, r, c), j));
            g.set(n, m);
        }
        out.push_back(g);
    }
    return out;
}

ChainMap random_chain_map(const ModPtr& M, const ModPtr& N, Rng& rng) {
    ChainMap g = make_chain_map(M, N);
    for (auto& b : chain_map_space(M, N))
        if (rng.coin(70)) g = add(g, scale(b, rng.scalar(M->field())));
    return g;
}

std::vector<ModPtr> sample_modules(const AlgPtr& A, uint64_t seed, int count, int maxdim) {
    Rng rng(seed);
    const Field f = A->field();
    std::vector<ModPtr> out;
    std::vector<ModPtr> base;
    auto keep = [&](DGModule M) -> bool {
        if (M.total_dim() == 0 || M.total_dim() > maxdim) return false;
        auto p = std::make_shared<DGModule>(std::move(M));
        out.push_back(p);
        base.push_back(p);
        return true;
    };
    int nres = static_cast<int>(residue_characters(A).size());
    for (int attempt = 0; static_cast<int>(out.size()) < count; ++attempt) {
        if (attempt > 50 * count + 100) throw Error("sample_modules: could not produce enough samples");
        int kind = rng.uniform(0, 6);
        int s = rng.uniform(-1, 1);
        switch (kind) {
            case 0:
                keep(shift(regular_module(A), s));
                break;
            case 1:
                keep(shift(k_dual(regular_module(A)), s));
                break;
            case 2:
                keep(shift(h0_as_module(A), s));
                break;
            case 3:
                keep(shift(residue_module(A, rng.uniform(0, nres - 1)), s));
                break;
            case 4: {
                // cone of a free map A[s] -> N hitting a random cycle
                if (base.empty()) break;
                auto N = base[rng.uniform(0, static_cast<int>(base.size()) - 1)];
                int deg = rng.uniform(N->lo(), N->hi());
                Mat Z = kernel_basis(N->diff(deg));
                if (Z.cols() == 0) break;
                Mat z = Z * rng.mat(f, Z.cols(), 1, 80);
                keep(cone(free_map(N, z, -deg)));
                break;
            }
            case 5: {
                if (base.size() < 2) break;
                auto P = base[rng.uniform(0, static_cast<int>(base.size()) - 1)];
                auto Q = base[rng.uniform(0, static_cast<int>(base.size()) - 1)];
                if (P->total_dim() + Q->total_dim() > maxdim) break;
                keep(direct_sum({*P, *Q}));
                break;
            }
            case 6: {
                if (base.size() < 2) break;
                auto P = base[rng.uniform(0, static_cast<int>(base.size()) - 1)];
                auto Q = base[rng.uniform(0, static_cast<int>(base.size()) - 1)];
                if (P->total_dim() + Q->total_dim() > maxdim) break;
                keep(cone(random_chain_map(P, Q, rng)));
                break;
            }
        }
    }
    return out;
}

}  // namespace dginj
