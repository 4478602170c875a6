#include "dginj/field.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace dginj {

namespace {

uint32_t invmod(uint32_t a, uint32_t p) {
    if (a % p == 0) throw Error("division by zero in F_" + std::to_string(p));
    int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr) {
        int64_t q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (t < 0) t += p;
    return static_cast<uint32_t>(t);
}

bool is_prime(uint32_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

Field Field::prime(uint32_t p) {
    if (!is_prime(p) || p >= (1u << 31)) throw Error("field characteristic must be a prime below 2^31, got " + std::to_string(p));
    return Field{Fp, p};
}

std::string Field::name() const { return kind == Q ? "Q" : "F" + std::to_string(p); }

Field Field::parse(const std::string& s) {
    if (s == "Q" || s == "QQ") return rationals();
    std::string t = s;
    if (!t.empty() && (t[0] == 'F' || t[0] == 'f')) t = t.substr(1);
    if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit) || t.size() > 10) throw Error("bad field '" + s + "'");
    return prime(static_cast<uint32_t>(std::stoul(t)));
}

// ---------------- Rat ----------------

namespace {

constexpr __int128 kSmall = INT64_MAX;

unsigned __int128 uabs(__int128 x) { return x < 0 ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x); }

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(static_cast<uint64_t>(a), static_cast<uint64_t>(b));
    while (b) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

mpz_class mpz_of(__int128 x) {
    unsigned __int128 a = uabs(x);
    mpz_class z = static_cast<unsigned long>(static_cast<uint64_t>(a >> 64));
    z <<= 64;
    z += static_cast<unsigned long>(static_cast<uint64_t>(a));
    return x < 0 ? mpz_class(-z) : z;
}

}  // namespace

Rat::Rat(long v) : n_(v) {
    if (v < -INT64_MAX) *this = Rat(mpq_class(v));
}

Rat::Rat(const mpq_class& q0) {
    mpq_class q = q0;
    q.canonicalize();
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (mpz_fits_slong_p(n.get_mpz_t()) && mpz_fits_slong_p(d.get_mpz_t()) && n.get_si() != INT64_MIN) {
        n_ = n.get_si();
        d_ = d.get_si();
    } else {
        big_ = std::make_shared<const mpq_class>(q);
    }
}

Rat Rat::make(__int128 n, __int128 d) {
    if (d < 0) n = -n, d = -d;
    if (n == 0) return Rat();
    if (d != 1) {
        auto g = static_cast<__int128>(gcd128(uabs(n), static_cast<unsigned __int128>(d)));
        if (g != 1) n /= g, d /= g;
    }
    Rat r;
    if (n <= kSmall && n >= -kSmall && d <= kSmall) {
        r.n_ = static_cast<int64_t>(n);
        r.d_ = static_cast<int64_t>(d);
        return r;
    }
    mpq_class q(mpz_of(n), mpz_of(d));
    q.canonicalize();
    r.big_ = std::make_shared<const mpq_class>(q);
    return r;
}

mpq_class Rat::mpq() const {
    if (big_) return *big_;
    return mpq_class(static_cast<long>(n_), static_cast<unsigned long>(d_));
}

int Rat::sign() const {
    if (big_) return sgn(*big_);
    return (n_ > 0) - (n_ < 0);
}

Rat Rat::operator+(const Rat& o) const {
    if (big_ || o.big_) return Rat(mpq_class(mpq() + o.mpq()));
    if (d_ == 1 && o.d_ == 1) return make(static_cast<__int128>(n_) + o.n_, 1);
    return make(static_cast<__int128>(n_) * o.d_ + static_cast<__int128>(o.n_) * d_, static_cast<__int128>(d_) * o.d_);
}

Rat Rat::operator*(const Rat& o) const {
    if (big_ || o.big_) return Rat(mpq_class(mpq() * o.mpq()));
    if (n_ == 0 || o.n_ == 0) return Rat();
    return make(static_cast<__int128>(n_) * o.n_, static_cast<__int128>(d_) * o.d_);
}

Rat Rat::operator-() const {
    if (big_) return Rat(mpq_class(-*big_));
    Rat r = *this;
    r.n_ = -n_;
    return r;
}

Rat Rat::inv() const {
    if (is_zero()) throw Error("division by zero in Q");
    if (big_) return Rat(mpq_class(1 / *big_));
    Rat r;
    r.n_ = n_ < 0 ? -d_ : d_;
    r.d_ = n_ < 0 ? -n_ : n_;
    return r;
}

bool Rat::operator==(const Rat& o) const {
    if (big_ || o.big_) return big_ && o.big_ && *big_ == *o.big_;
    return n_ == o.n_ && d_ == o.d_;
}

std::string Rat::str() const {
    if (big_) return big_->get_str();
    return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
}

// ---------------- Scalar ----------------

Scalar::Scalar(Field f, long v) : f_(f) {
    if (f.is_q()) {
        q_ = Rat(v);
    } else {
        long r = v % static_cast<long>(f.p);
        if (r < 0) r += f.p;
        u_ = static_cast<uint32_t>(r);
    }
}

Scalar::Scalar(Field f, const mpq_class& q) : f_(f) {
    if (f.is_q()) {
        q_ = Rat(q);
    } else {
        mpz_class n = q.get_num() % f.p, d = q.get_den() % f.p;
        if (n < 0) n += f.p;
        u_ = static_cast<uint32_t>(static_cast<uint64_t>(n.get_ui()) * invmod(static_cast<uint32_t>(d.get_ui()), f.p) % f.p);
    }
}

static void same(const Field& a, const Field& b) {
    if (a != b) throw Error("mixed fields: " + a.name() + " vs " + b.name());
}

Scalar Scalar::operator+(const Scalar& o) const {
    same(f_, o.f_);
    if (f_.is_q()) return raw_q(q_ + o.q_);
    uint64_t s = static_cast<uint64_t>(u_) + o.u_;
    return raw(f_, static_cast<uint32_t>(s % f_.p));
}
Scalar Scalar::operator-(const Scalar& o) const {
    same(f_, o.f_);
    if (f_.is_q()) return raw_q(q_ - o.q_);
    return raw(f_, static_cast<uint32_t>((static_cast<uint64_t>(u_) + f_.p - o.u_) % f_.p));
}
Scalar Scalar::operator*(const Scalar& o) const {
    same(f_, o.f_);
    if (f_.is_q()) return raw_q(q_ * o.q_);
    return raw(f_, static_cast<uint32_t>(static_cast<uint64_t>(u_) * o.u_ % f_.p));
}
Scalar Scalar::inv() const {
    if (f_.is_q()) return raw_q(q_.inv());
    return raw(f_, invmod(u_, f_.p));
}
Scalar Scalar::operator/(const Scalar& o) const {
    same(f_, o.f_);
    return *this * o.inv();
}
Scalar Scalar::operator-() const {
    if (f_.is_q()) return raw_q(-q_);
    return raw(f_, u_ == 0 ? 0 : f_.p - u_);
}
bool Scalar::operator==(const Scalar& o) const {
    if (f_ != o.f_) return false;
    return f_.is_q() ? q_ == o.q_ : u_ == o.u_;
}
std::string Scalar::str() const {
    if (f_.is_q()) return q_.str();
    // symmetric representative reads better
    if (u_ > f_.p / 2) return "-" + std::to_string(f_.p - u_);
    return std::to_string(u_);
}

// ---------------- Mat ----------------

struct MatAccess {
    template <class T>
    static std::vector<std::vector<T>>& vals(Mat& m) {
        if constexpr (std::is_same_v<T, Rat>) return m.q_;
        else return m.u_;
    }
    template <class T>
    static const std::vector<std::vector<T>>& vals(const Mat& m) {
        if constexpr (std::is_same_v<T, Rat>) return m.q_;
        else return m.u_;
    }
    static std::vector<std::vector<int>>& cols(Mat& m) { return m.ci_; }
    static const std::vector<std::vector<int>>& cols(const Mat& m) { return m.ci_; }
};

namespace {

struct FpOps {
    using T = uint32_t;
    uint32_t p;
    static bool zero(T x) { return x == 0; }
    T add(T a, T b) const {
        uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    T sub(T a, T b) const { return a >= b ? a - b : a + (p - b); }
    T mul(T a, T b) const { return static_cast<T>(static_cast<uint64_t>(a) * b % p); }
    T inv(T a) const { return invmod(a, p); }
    static bool one(T a) { return a == 1; }
    static T of(const Scalar& s) { return s.residue(); }
    Scalar to(T x) const { return Scalar::raw(Field::prime(p), x); }
};

struct QOps {
    using T = Rat;
    static bool zero(const T& x) { return x.is_zero(); }
    static T add(const T& a, const T& b) { return a + b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T inv(const T& a) { return a.inv(); }
    static bool one(const T& a) { return a.is_one(); }
    static const T& of(const Scalar& s) { return s.rat(); }
    static Scalar to(const T& x) { return Scalar::raw_q(x); }
};

template <class Fn>
decltype(auto) dispatch(const Field& f, Fn&& fn) {
    if (f.is_q()) return fn(QOps{});
    return fn(FpOps{f.p});
}

// dense scratch row with a list of touched columns
template <class T>
struct Acc {
    std::vector<T> v;
    std::vector<char> on;
    std::vector<int> touched;
    explicit Acc(int n) : v(n), on(n, 0) {}
    T& at(int j) {
        if (!on[j]) {
            on[j] = 1;
            touched.push_back(j);
            v[j] = T();
        }
        return v[j];
    }
    // drain into a sorted sparse row, dropping zeros
    template <class Ops>
    void drain(const Ops& ops, std::vector<int>& c, std::vector<T>& out) {
        std::sort(touched.begin(), touched.end());
        c.clear();
        out.clear();
        for (int j : touched) {
            if (!ops.zero(v[j])) {
                c.push_back(j);
                out.push_back(std::move(v[j]));
            }
            on[j] = 0;
        }
        touched.clear();
    }
};

// out = a + s * b on sparse rows (column shift applied to b)
template <class Ops, class T>
void merge_axpy(const Ops& ops, const std::vector<int>& ac, const std::vector<T>& av, const T& s, const std::vector<int>& bc,
                const std::vector<T>& bv, int shift, std::vector<int>& oc, std::vector<T>& ov) {
    oc.clear();
    ov.clear();
    size_t i = 0, j = 0;
    while (i < ac.size() || j < bc.size()) {
        int ca = i < ac.size() ? ac[i] : INT32_MAX;
        int cb = j < bc.size() ? bc[j] + shift : INT32_MAX;
        if (ca < cb) {
            oc.push_back(ca);
            ov.push_back(av[i++]);
        } else if (cb < ca) {
            T x = ops.mul(s, bv[j++]);
            if (!ops.zero(x)) {
                oc.push_back(cb);
                ov.push_back(std::move(x));
            }
        } else {
            T x = ops.add(av[i++], ops.mul(s, bv[j++]));
            if (!ops.zero(x)) {
                oc.push_back(ca);
                ov.push_back(std::move(x));
            }
        }
    }
}

}  // namespace

Mat::Mat(Field f, int r, int c) : f_(f), r_(r), c_(c) {
    if (r < 0 || c < 0) throw Error("negative matrix shape");
    ci_.assign(r, {});
    if (f.is_q())
        q_.assign(r, {});
    else
        u_.assign(r, {});
}

Mat Mat::identity(Field f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Mat Mat::from_rows(Field f, const std::vector<std::vector<long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    Mat m(f, r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw Error("ragged rows");
        for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

Mat Mat::from_ints(Field f, int r, int c, const std::vector<long>& e) {
    if (static_cast<int>(e.size()) != r * c) throw Error("entry count mismatch");
    Mat m(f, r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.set(i, j, e[static_cast<size_t>(i) * c + j]);
    return m;
}

Scalar Mat::row_val(int i, int k) const {
    if (f_.is_q()) return Scalar::raw_q(q_[i][k]);
    return Scalar::raw(f_, u_[i][k]);
}

Scalar Mat::at(int i, int j) const {
    if (i < 0 || i >= r_ || j < 0 || j >= c_) throw Error("matrix index out of range");
    const auto& c = ci_[i];
    auto it = std::lower_bound(c.begin(), c.end(), j);
    if (it == c.end() || *it != j) return f_.is_q() ? Scalar::raw_q(Rat()) : Scalar::raw(f_, 0);
    return row_val(i, static_cast<int>(it - c.begin()));
}

void Mat::set(int i, int j, const Scalar& s) {
    same(f_, s.field());
    if (i < 0 || i >= r_ || j < 0 || j >= c_) throw Error("matrix index out of range");
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        auto& c = ci_[i];
        auto& v = MatAccess::vals<T>(*this)[i];
        auto it = std::lower_bound(c.begin(), c.end(), j);
        auto k = it - c.begin();
        const bool present = it != c.end() && *it == j;
        if (s.is_zero()) {
            if (present) {
                c.erase(it);
                v.erase(v.begin() + k);
            }
        } else if (present) {
            v[k] = ops.of(s);
        } else {
            c.insert(it, j);
            v.insert(v.begin() + k, ops.of(s));
        }
    });
}

void Mat::add_to(int i, int j, const Scalar& s) {
    same(f_, s.field());
    set(i, j, at(i, j) + s);
}

bool Mat::entry_zero(int i, int j) const {
    const auto& c = ci_[i];
    return !std::binary_search(c.begin(), c.end(), j);
}

bool Mat::is_zero() const {
    return std::all_of(ci_.begin(), ci_.end(), [](const std::vector<int>& c) { return c.empty(); });
}

bool Mat::is_identity() const {
    if (r_ != c_) return false;
    for (int i = 0; i < r_; ++i)
        if (ci_[i].size() != 1 || ci_[i][0] != i || !row_val(i, 0).is_one()) return false;
    return true;
}

void Mat::check_same(const Mat& o, const char* what) const {
    same(f_, o.f_);
    (void)what;
}

Mat Mat::operator*(const Mat& o) const {
    check_same(o, "mul");
    if (c_ != o.r_) throw Error("shape mismatch in product: " + std::to_string(r_) + "x" + std::to_string(c_) + " * " + std::to_string(o.r_) + "x" + std::to_string(o.c_));
    Mat out(f_, r_, o.c_);
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        const auto& A = MatAccess::vals<T>(*this);
        const auto& B = MatAccess::vals<T>(o);
        auto& C = MatAccess::vals<T>(out);
        Acc<T> acc(o.c_);
        for (int i = 0; i < r_; ++i) {
            if (ci_[i].empty()) continue;
            for (size_t a = 0; a < ci_[i].size(); ++a) {
                const int k = ci_[i][a];
                const auto& bc = o.ci_[k];
                const auto& bv = B[k];
                for (size_t b = 0; b < bc.size(); ++b) {
                    T& x = acc.at(bc[b]);
                    x = ops.add(x, ops.mul(A[i][a], bv[b]));
                }
            }
            acc.drain(ops, out.ci_[i], C[i]);
        }
    });
    return out;
}

Mat Mat::operator+(const Mat& o) const {
    Mat out = *this;
    out += o;
    return out;
}

Mat& Mat::operator+=(const Mat& o) {
    check_same(o, "add");
    if (r_ != o.r_ || c_ != o.c_) throw Error("shape mismatch in sum");
    add_block(0, 0, o, Scalar(f_, 1));
    return *this;
}

Mat Mat::operator-() const { return scaled(Scalar(f_, -1)); }
Mat Mat::operator-(const Mat& o) const {
    Mat out = *this;
    out.add_block(0, 0, o, Scalar(f_, -1));
    return out;
}

Mat Mat::scaled(const Scalar& s) const {
    same(f_, s.field());
    if (s.is_zero()) return Mat(f_, r_, c_);
    Mat out = *this;
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        const T x = ops.of(s);
        for (auto& row : MatAccess::vals<T>(out))
            for (auto& v : row) v = ops.mul(v, x);
    });
    return out;
}

bool Mat::operator==(const Mat& o) const {
    return f_ == o.f_ && r_ == o.r_ && c_ == o.c_ && ci_ == o.ci_ && (f_.is_q() ? q_ == o.q_ : u_ == o.u_);
}

Mat Mat::transpose() const {
    Mat t(f_, c_, r_);
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        const auto& V = MatAccess::vals<T>(*this);
        auto& W = MatAccess::vals<T>(t);
        for (int i = 0; i < r_; ++i)
            for (size_t k = 0; k < ci_[i].size(); ++k) {
                t.ci_[ci_[i][k]].push_back(i);
                W[ci_[i][k]].push_back(V[i][k]);
            }
    });
    return t;
}

Mat Mat::block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || nr < 0 || nc < 0 || r0 + nr > r_ || c0 + nc > c_) throw Error("block out of range");
    Mat b(f_, nr, nc);
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        const auto& V = MatAccess::vals<T>(*this);
        auto& W = MatAccess::vals<T>(b);
        for (int i = 0; i < nr; ++i) {
            const auto& c = ci_[r0 + i];
            auto lo = std::lower_bound(c.begin(), c.end(), c0) - c.begin();
            auto hi = std::lower_bound(c.begin(), c.end(), c0 + nc) - c.begin();
            for (auto k = lo; k < hi; ++k) {
                b.ci_[i].push_back(c[k] - c0);
                W[i].push_back(V[r0 + i][k]);
            }
        }
    });
    return b;
}

void Mat::put(int r0, int c0, const Mat& b) {
    check_same(b, "put");
    if (r0 < 0 || c0 < 0 || r0 + b.r_ > r_ || c0 + b.c_ > c_) throw Error("put out of range");
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        auto& V = MatAccess::vals<T>(*this);
        const auto& W = MatAccess::vals<T>(b);
        for (int i = 0; i < b.r_; ++i) {
            auto& c = ci_[r0 + i];
            auto& v = V[r0 + i];
            auto lo = std::lower_bound(c.begin(), c.end(), c0) - c.begin();
            auto hi = std::lower_bound(c.begin(), c.end(), c0 + b.c_) - c.begin();
            if (lo == hi && b.ci_[i].empty()) continue;
            std::vector<int> nc(c.begin(), c.begin() + lo);
            std::vector<T> nv(v.begin(), v.begin() + lo);
            for (size_t k = 0; k < b.ci_[i].size(); ++k) {
                nc.push_back(b.ci_[i][k] + c0);
                nv.push_back(W[i][k]);
            }
            nc.insert(nc.end(), c.begin() + hi, c.end());
            nv.insert(nv.end(), v.begin() + hi, v.end());
            c = std::move(nc);
            v = std::move(nv);
        }
        (void)ops;
    });
}

void Mat::add_block(int r0, int c0, const Mat& b, const Scalar& s) {
    check_same(b, "add_block");
    same(f_, s.field());
    if (r0 < 0 || c0 < 0 || r0 + b.r_ > r_ || c0 + b.c_ > c_) throw Error("add_block out of range");
    if (s.is_zero()) return;
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        auto& V = MatAccess::vals<T>(*this);
        const auto& W = MatAccess::vals<T>(b);
        const T x = ops.of(s);
        std::vector<int> oc;
        std::vector<T> ov;
        for (int i = 0; i < b.r_; ++i) {
            if (b.ci_[i].empty()) continue;
            merge_axpy(ops, ci_[r0 + i], V[r0 + i], x, b.ci_[i], W[i], c0, oc, ov);
            std::swap(ci_[r0 + i], oc);
            std::swap(V[r0 + i], ov);
        }
    });
}

Mat Mat::select_cols(const std::vector<int>& js) const {
    Mat out(f_, r_, static_cast<int>(js.size()));
    std::vector<std::vector<int>> where(c_);
    for (size_t t = 0; t < js.size(); ++t) {
        if (js[t] < 0 || js[t] >= c_) throw Error("select_cols out of range");
        where[js[t]].push_back(static_cast<int>(t));
    }
    bool sorted = std::is_sorted(js.begin(), js.end());
    dispatch(f_, [&](auto ops) {
        using T = typename decltype(ops)::T;
        const auto& V = MatAccess::vals<T>(*this);
        auto& W = MatAccess::vals<T>(out);
        for (int i = 0; i < r_; ++i) {
            std::vector<std::pair<int, T>> e;
            for (size_t k = 0; k < ci_[i].size(); ++k)
                for (int t : where[ci_[i][k]]) e.emplace_back(t, V[i][k]);
            if (!sorted) std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& [t, x] : e) {
                out.ci_[i].push_back(t);
                W[i].push_back(std::move(x));
            }
        }
        (void)ops;
    });
    return out;
}

Mat Mat::select_rows(const std::vector<int>& is) const {
    Mat out(f_, static_cast<int>(is.size()), c_);
    for (size_t t = 0; t < is.size(); ++t) {
        if (is[t] < 0 || is[t] >= r_) throw Error("select_rows out of range");
        out.ci_[t] = ci_[is[t]];
        if (f_.is_q())
            out.q_[t] = q_[is[t]];
        else
            out.u_[t] = u_[is[t]];
    }
    return out;
}

Mat Mat::hcat(const Mat& a, const Mat& b) {
    same(a.f_, b.f_);
    if (a.r_ != b.r_) throw Error("hcat row mismatch");
    Mat m(a.f_, a.r_, a.c_ + b.c_);
    m.put(0, 0, a);
    m.put(0, a.c_, b);
    return m;
}

Mat Mat::vcat(const Mat& a, const Mat& b) {
    same(a.f_, b.f_);
    if (a.c_ != b.c_) throw Error("vcat column mismatch");
    Mat m(a.f_, a.r_ + b.r_, a.c_);
    m.put(0, 0, a);
    m.put(a.r_, 0, b);
    return m;
}

Mat Mat::direct_sum(const Mat& a, const Mat& b) {
    same(a.f_, b.f_);
    Mat m(a.f_, a.r_ + b.r_, a.c_ + b.c_);
    m.put(0, 0, a);
    m.put(a.r_, a.c_, b);
    return m;
}

std::vector<std::vector<std::string>> Mat::to_strings() const {
    std::vector<std::vector<std::string>> out(r_, std::vector<std::string>(c_));
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) out[i][j] = at(i, j).str();
    return out;
}

// ---------------- elimination ----------------

namespace {

// Gauss-Jordan by row insertion: pivot rows stay mutually reduced, so the result is the
// (unique) reduced row echelon form
template <class Ops>
void rref_rows(const Ops& ops, const Mat& m, Mat& R, std::vector<int>& piv) {
    using T = typename Ops::T;
    const int c = m.cols();
    const auto& Mc = MatAccess::cols(m);
    const auto& Mv = MatAccess::vals<T>(m);
    std::vector<std::vector<int>> pc;  // pivot rows, in insertion order
    std::vector<std::vector<T>> pv;
    std::vector<int> lead;
    std::vector<int> slot(c, -1);  // column -> pivot row
    Acc<T> acc(c);
    std::vector<int> oc;
    std::vector<T> ov;
    for (int i = 0; i < m.rows(); ++i) {
        if (Mc[i].empty()) continue;
        for (size_t k = 0; k < Mc[i].size(); ++k) acc.at(Mc[i][k]) = Mv[i][k];
        // coefficients on existing pivot columns are final: pivot rows vanish on other pivots
        std::vector<std::pair<int, T>> hits;
        for (size_t k = 0; k < Mc[i].size(); ++k)
            if (slot[Mc[i][k]] >= 0) hits.emplace_back(slot[Mc[i][k]], Mv[i][k]);
        for (auto& [s, a] : hits) {
            const auto& rc = pc[s];
            const auto& rv = pv[s];
            for (size_t k = 0; k < rc.size(); ++k) {
                T& x = acc.at(rc[k]);
                x = ops.sub(x, ops.mul(a, rv[k]));
            }
        }
        std::vector<int> vc;
        std::vector<T> vv;
        acc.drain(ops, vc, vv);
        if (vc.empty()) continue;
        const int cv = vc[0];
        if (!ops.one(vv[0])) {
            const T iv = ops.inv(vv[0]);
            for (auto& x : vv) x = ops.mul(x, iv);
        }
        // clear the new pivot column from the older pivot rows
        for (size_t s = 0; s < pc.size(); ++s) {
            auto it = std::lower_bound(pc[s].begin(), pc[s].end(), cv);
            if (it == pc[s].end() || *it != cv) continue;
            T f = pv[s][it - pc[s].begin()];
            T nf = ops.sub(T(), f);
            merge_axpy(ops, pc[s], pv[s], nf, vc, vv, 0, oc, ov);
            std::swap(pc[s], oc);
            std::swap(pv[s], ov);
        }
        slot[cv] = static_cast<int>(pc.size());
        lead.push_back(cv);
        pc.push_back(std::move(vc));
        pv.push_back(std::move(vv));
    }
    std::vector<int> order(lead.size());
    for (size_t t = 0; t < order.size(); ++t) order[t] = static_cast<int>(t);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lead[a] < lead[b]; });
    R = Mat(m.field(), m.rows(), c);
    auto& Rc = MatAccess::cols(R);
    auto& Rv = MatAccess::vals<T>(R);
    for (size_t t = 0; t < order.size(); ++t) {
        Rc[t] = std::move(pc[order[t]]);
        Rv[t] = std::move(pv[order[t]]);
        piv.push_back(lead[order[t]]);
    }
}

}  // namespace

Echelon rref(const Mat& m) {
    Echelon e;
    dispatch(m.field(), [&](auto ops) { rref_rows(ops, m, e.R, e.piv); });
    return e;
}

int rank(const Mat& m) { return static_cast<int>(rref(m).piv.size()); }

std::vector<int> pivot_columns(const Mat& m) { return rref(m).piv; }

Mat kernel_basis(const Mat& m) {
    Echelon e = rref(m);
    const int c = m.cols();
    std::vector<int> free_index(c, -1);
    std::vector<char> is_piv(c, 0);
    for (int pc : e.piv) is_piv[pc] = 1;
    int nfree = 0;
    for (int j = 0; j < c; ++j)
        if (!is_piv[j]) free_index[j] = nfree++;
    Mat k(m.field(), c, nfree);
    for (int j = 0; j < c; ++j)
        if (!is_piv[j]) k.set(j, free_index[j], 1);
    for (size_t r = 0; r < e.piv.size(); ++r) {
        const int ri = static_cast<int>(r);
        for (int t = 0; t < e.R.row_nnz(ri); ++t) {
            int fc = e.R.row_col(ri, t);
            if (fc != e.piv[r]) k.set(e.piv[r], free_index[fc], -e.R.row_val(ri, t));
        }
    }
    return k;
}

Mat image_basis(const Mat& m) { return m.select_cols(pivot_columns(m)); }

std::optional<Mat> solve(const Mat& m, const Mat& b) {
    same(m.field(), b.field());
    if (m.rows() != b.rows()) throw Error("solve: row mismatch");
    const int c = m.cols();
    Echelon e = rref(Mat::hcat(m, b));
    Mat x(m.field(), c, b.cols());
    for (size_t r = 0; r < e.piv.size(); ++r) {
        if (e.piv[r] >= c) return std::nullopt;
        const int ri = static_cast<int>(r);
        for (int t = 0; t < e.R.row_nnz(ri); ++t)
            if (e.R.row_col(ri, t) >= c) x.set(e.piv[r], e.R.row_col(ri, t) - c, e.R.row_val(ri, t));
    }
    return x;
}

bool in_span(const Mat& basis, const Mat& v) { return solve(basis, v).has_value(); }

Mat left_inverse(const Mat& m) {
    std::vector<int> rows = pivot_columns(m.transpose());
    if (static_cast<int>(rows.size()) != m.cols()) throw Error("left_inverse: not full column rank");
    auto inv = inverse(m.select_rows(rows));
    Mat L(m.field(), m.cols(), m.rows());
    for (size_t t = 0; t < rows.size(); ++t) L.put(0, rows[t], inv->col(static_cast<int>(t)));
    return L;
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    int n = m.rows();
    Echelon e = rref(Mat::hcat(m, Mat::identity(m.field(), n)));
    if (static_cast<int>(e.piv.size()) < n || (n > 0 && e.piv[n - 1] != n - 1)) return std::nullopt;
    return e.R.block(0, n, n, n);
}

Mat extend_basis(const Mat& base, const Mat& extra) {
    Echelon e = rref(Mat::hcat(base, extra));
    std::vector<int> pick;
    for (int pc : e.piv)
        if (pc >= base.cols()) pick.push_back(pc - base.cols());
    return extra.select_cols(pick);
}

Mat intersect(const Mat& a, const Mat& b) {
    Mat k = kernel_basis(Mat::hcat(a, -b));
    return image_basis(a * k.block(0, 0, a.cols(), k.cols()));
}

Subquotient subquotient(const Mat& Z, const Mat& B, Field f, int ambient) {
    Subquotient s;
    s.ambient = ambient;
    Mat z = Z.rows() == ambient ? Z : Mat(f, ambient, 0);
    Mat b = B.rows() == ambient ? B : Mat(f, ambient, 0);
    s.bbasis = image_basis(b);
    int rz = rank(z);
    if (rank(Mat::hcat(z, s.bbasis)) != rz) throw Error("subquotient: boundaries not contained in cycles");
    s.reps = extend_basis(s.bbasis, z);
    Mat C = Mat::hcat(s.bbasis, s.reps);
    Mat L = C.cols() ? left_inverse(C) : Mat(f, 0, ambient);
    s.proj = L.block(s.bbasis.cols(), 0, s.reps.cols(), ambient);
    return s;
}

Mat induced_map_on_quotients(const Mat& f, const Subquotient& src, const Subquotient& tgt) {
    if (f.cols() != src.ambient || f.rows() != tgt.ambient) throw Error("induced map: shape mismatch");
    Mat img = f * src.reps;
    Mat fb = f * src.bbasis;
    // compatibility: f(Z1) ⊆ Z2 is implied by proj being defined; check f(B1) ⊆ B2
    if (fb.cols() && rank(Mat::hcat(tgt.bbasis, fb)) != tgt.bbasis.cols()) throw Error("induced map: boundaries not preserved");
    return tgt.proj * img;
}

// ---------------- polynomials ----------------

void poly_trim(Poly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Field f = a[0].field();
    Poly r(a.size() + b.size() - 1, Scalar(f, 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

Poly poly_mod(const Poly& a0, const Poly& m0) {
    Poly a = a0, m = m0;
    poly_trim(a);
    poly_trim(m);
    if (m.empty()) throw Error("polynomial division by zero");
    Scalar lead = m.back().inv();
    while (a.size() >= m.size()) {
        Scalar c = a.back() * lead;
        size_t sh = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) a[sh + i] -= c * m[i];
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Scalar iv = a.back().inv();
        for (auto& x : a) x *= iv;
    }
    return a;
}

Scalar poly_eval(const Poly& a, const Scalar& x) {
    Scalar r(x.field(), 0);
    for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

namespace {

Poly poly_powmod(const Poly& base, mpz_class e, const Poly& m) {
    Field f = m[0].field();
    Poly r = {Scalar(f, 1)}, b = poly_mod(base, m);
    r = poly_mod(r, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(poly_mul(r, b), m);
        b = poly_mod(poly_mul(b, b), m);
        e >>= 1;
    }
    return r;
}

// g is a product of distinct linear factors
void split_linear(const Poly& g, Field f, std::vector<Scalar>& out) {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        out.push_back(-(g[0] / g[1]));
        return;
    }
    for (long delta = 0;; ++delta) {
        Poly xd = {Scalar(f, delta), Scalar(f, 1)};
        Poly h = poly_powmod(xd, mpz_class((f.p - 1) / 2), g);
        if (h.empty()) h = {Scalar(f, 0)};
        h[0] -= Scalar(f, 1);
        poly_trim(h);
        Poly d = poly_gcd(g, h);
        if (d.size() > 1 && d.size() < g.size()) {
            split_linear(d, f, out);
            // cofactor g / d via division
            Poly q, a = g;
            Scalar lead = d.back().inv();
            q.assign(a.size() - d.size() + 1, Scalar(f, 0));
            while (a.size() >= d.size()) {
                Scalar c = a.back() * lead;
                size_t sh = a.size() - d.size();
                q[sh] = c;
                for (size_t i = 0; i < d.size(); ++i) a[sh + i] -= c * d[i];
                a.pop_back();
            }
            split_linear(q, f, out);
            return;
        }
        if (delta > 4000) throw Error("root splitting did not converge");
    }
}

std::vector<mpz_class> divisors(mpz_class n) {
    if (n < 0) n = -n;
    if (n > mpz_class("1000000000000")) throw Unsupported("rational root search: coefficient too large");
    std::vector<mpz_class> d;
    for (mpz_class i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i * i != n) d.push_back(n / i);
        }
    return d;
}

}  // namespace

std::vector<Scalar> poly_roots(const Poly& a0, Field f) {
    Poly a = a0;
    poly_trim(a);
    std::vector<Scalar> out;
    if (a.size() <= 1) return out;
    if (!f.is_q()) {
        if (f.p <= 2000) {
            for (uint32_t v = 0; v < f.p; ++v)
                if (poly_eval(a, Scalar::raw(f, v)).is_zero()) out.push_back(Scalar::raw(f, v));
            return out;
        }
        Poly x = {Scalar(f, 0), Scalar(f, 1)};
        Poly xp = poly_powmod(x, mpz_class(f.p), a);
        if (xp.size() < 2) xp.resize(2, Scalar(f, 0));
        xp[1] -= Scalar(f, 1);
        poly_trim(xp);
        Poly g = poly_gcd(a, xp);
        split_linear(g, f, out);
        std::sort(out.begin(), out.end(), [](const Scalar& l, const Scalar& r) { return l.residue() < r.residue(); });
        return out;
    }
    // rational root theorem on the integral primitive form
    mpz_class den = 1;
    for (auto& c : a) den = lcm(den, c.rational().get_den());
    std::vector<mpz_class> z;
    for (auto& c : a) z.push_back(mpz_class(c.rational() * den));
    size_t low = 0;
    while (z[low] == 0) ++low;
    if (low > 0) out.push_back(Scalar(f, 0));
    std::vector<mpz_class> zz(z.begin() + static_cast<long>(low), z.end());
    if (zz.size() > 1) {
        Poly red(a.begin() + static_cast<long>(low), a.end());
        std::vector<mpq_class> cand;
        for (auto& u : divisors(zz.front()))
            for (auto& v : divisors(zz.back())) {
                cand.emplace_back(u, v);
                cand.emplace_back(-u, v);
            }
        for (auto& c : cand) c.canonicalize();
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (auto& c : cand)
            if (poly_eval(red, Scalar(f, c)).is_zero()) out.push_back(Scalar(f, c));
    }
    std::sort(out.begin(), out.end(), [](const Scalar& l, const Scalar& r) { return l.rational() < r.rational(); });
    return out;
}

Poly minimal_polynomial(const Mat& m) {
    if (m.rows() != m.cols()) throw Error("minimal polynomial of non-square matrix");
    Field f = m.field();
    int n = m.rows();
    auto flat = [&](const Mat& a) {
        Mat v(f, n * n, 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v.set(i * n + j, 0, a.at(i, j));
        return v;
    };
    Mat powers(f, n * n, 0);
    Mat cur = Mat::identity(f, n);
    for (int k = 0; k <= n; ++k) {
        Mat v = flat(cur);
        auto c = solve(powers, v);
        if (c) {
            Poly p(k + 1, Scalar(f, 0));
            for (int i = 0; i < k; ++i) p[i] = -c->at(i, 0);
            p[k] = Scalar(f, 1);
            return p;
        }
        powers = Mat::hcat(powers, v);
        cur = cur * m;
    }
    throw Error("minimal polynomial: degree exceeded dimension");
}

}  // namespace dginj
