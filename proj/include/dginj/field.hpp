#pragma once
// exact scalars and sparse matrices over F_p or Q
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dginj {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// feature not available for this input class (e.g. non-split residue field over Q)
struct Unsupported : Error {
    using Error::Error;
};

struct Field {
    enum Kind : uint8_t { Fp, Q };
    Kind kind = Fp;
    uint32_t p = 32003;

    static Field prime(uint32_t p);
    static Field rationals() { return Field{Q, 0}; }

    bool is_q() const { return kind == Q; }
    uint32_t characteristic() const { return kind == Q ? 0 : p; }
    std::string name() const;            // "F32003" / "Q"
    static Field parse(const std::string& s);

    bool operator==(const Field& o) const { return kind == o.kind && (kind == Q || p == o.p); }
    bool operator!=(const Field& o) const { return !(*this == o); }
};

// a rational held in int64 when it fits and in GMP otherwise; always reduced, so the
// representation is canonical
class Rat {
public:
    Rat() = default;
    Rat(long v);
    explicit Rat(const mpq_class& q);

    mpq_class mpq() const;
    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
    int sign() const;

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const { return *this + -o; }
    Rat operator*(const Rat& o) const;
    Rat operator-() const;
    Rat inv() const;
    bool operator==(const Rat& o) const;
    bool operator!=(const Rat& o) const { return !(*this == o); }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    std::string str() const;

private:
    static Rat make(__int128 n, __int128 d);
    int64_t n_ = 0, d_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

class Scalar {
public:
    Scalar() = default;
    Scalar(Field f, long v);
    Scalar(Field f, const mpq_class& q);

    static Scalar raw(Field f, uint32_t u) { Scalar s; s.f_ = f; s.u_ = u; return s; }
    static Scalar raw_q(const Rat& r) { Scalar s; s.f_ = Field::rationals(); s.q_ = r; return s; }

    const Field& field() const { return f_; }
    bool is_zero() const { return f_.is_q() ? q_.is_zero() : u_ == 0; }
    bool is_one() const { return f_.is_q() ? q_.is_one() : u_ == 1; }
    uint32_t residue() const { return u_; }
    mpq_class rational() const { return q_.mpq(); }
    const Rat& rat() const { return q_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    std::string str() const;

private:
    Field f_{};
    uint32_t u_ = 0;
    Rat q_;
};

inline Scalar sign_scalar(Field f, bool neg) { return Scalar(f, neg ? -1 : 1); }

class Mat {
public:
    Mat() = default;
    Mat(Field f, int r, int c);

    static Mat zero(Field f, int r, int c) { return Mat(f, r, c); }
    static Mat identity(Field f, int n);
    static Mat from_rows(Field f, const std::vector<std::vector<long>>& rows);
    static Mat from_ints(Field f, int r, int c, const std::vector<long>& entries);

    int rows() const { return r_; }
    int cols() const { return c_; }
    const Field& field() const { return f_; }
    bool empty() const { return r_ == 0 || c_ == 0; }

    Scalar at(int i, int j) const;
    void set(int i, int j, const Scalar& s);
    void set(int i, int j, long v) { set(i, j, Scalar(f_, v)); }
    void add_to(int i, int j, const Scalar& s);
    bool entry_zero(int i, int j) const;
    bool is_zero() const;
    bool is_identity() const;

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator-() const;
    Mat scaled(const Scalar& s) const;
    bool operator==(const Mat& o) const;
    bool operator!=(const Mat& o) const { return !(*this == o); }
    Mat& operator+=(const Mat& o);

    Mat transpose() const;
    Mat block(int r0, int c0, int nr, int nc) const;
    void put(int r0, int c0, const Mat& b);
    // put b scaled by s, added onto the existing entries
    void add_block(int r0, int c0, const Mat& b, const Scalar& s);
    Mat col(int j) const { return block(0, j, r_, 1); }
    Mat select_cols(const std::vector<int>& js) const;
    Mat select_rows(const std::vector<int>& is) const;
    static Mat hcat(const Mat& a, const Mat& b);
    static Mat vcat(const Mat& a, const Mat& b);
    static Mat direct_sum(const Mat& a, const Mat& b);

    std::vector<std::vector<std::string>> to_strings() const;

    // nonzero entries of row i, by increasing column
    int row_nnz(int i) const { return static_cast<int>(ci_[i].size()); }
    int row_col(int i, int k) const { return ci_[i][k]; }
    Scalar row_val(int i, int k) const;

private:
    friend struct MatAccess;
    void check_same(const Mat& o, const char* what) const;
    Field f_{};
    int r_ = 0, c_ = 0;
    // sparse rows: sorted column indices, values without zeros (only one value array is used)
    std::vector<std::vector<int>> ci_;
    std::vector<std::vector<uint32_t>> u_;
    std::vector<std::vector<Rat>> q_;
};

// ---- elimination ----
struct Echelon {
    Mat R;                 // reduced row echelon form
    std::vector<int> piv;  // pivot column of each nonzero row
};
Echelon rref(const Mat& m);

int rank(const Mat& m);
Mat kernel_basis(const Mat& m);
// independent columns of m (pivot columns, leftmost first)
Mat image_basis(const Mat& m);
std::vector<int> pivot_columns(const Mat& m);
std::optional<Mat> solve(const Mat& m, const Mat& b);
bool in_span(const Mat& basis, const Mat& v);
// left inverse of a full column rank matrix
Mat left_inverse(const Mat& m);
std::optional<Mat> inverse(const Mat& m);
// columns of `extra` that extend span(base), greedily left to right
Mat extend_basis(const Mat& base, const Mat& extra);
// basis of span(a) ∩ span(b)
Mat intersect(const Mat& a, const Mat& b);

// Z/B where span B ⊆ span Z inside an ambient space of dimension V
struct Subquotient {
    int ambient = 0;
    Mat reps;   // V x h, representatives of a basis of Z/B
    Mat proj;   // h x V, class of a vector of Z
    Mat bbasis; // V x b, basis of B
    int dim() const { return reps.cols(); }
};
Subquotient subquotient(const Mat& Z, const Mat& B, Field f, int ambient);
// H(f) : Z1/B1 -> Z2/B2 for f mapping Z1 into Z2 and B1 into B2
Mat induced_map_on_quotients(const Mat& f, const Subquotient& src, const Subquotient& tgt);

// ---- polynomials over the field (coefficients low to high) ----
using Poly = std::vector<Scalar>;
void poly_trim(Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& m);
Poly poly_gcd(Poly a, Poly b);
Scalar poly_eval(const Poly& a, const Scalar& x);
// distinct roots lying in the field; deterministic ascending order
std::vector<Scalar> poly_roots(const Poly& a, Field f);
// minimal polynomial of a square matrix (monic)
Poly minimal_polynomial(const Mat& m);

}  // namespace dginj
