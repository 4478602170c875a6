#pragma once
// non-positive DG algebras, the Artinian ring H^0, and its block decomposition
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dginj/field.hpp"
#include "dginj/report.hpp"

namespace dginj {

constexpr int kMinDegree = -8;
constexpr int kMaxTotalDim = 512;

// finite-dimensional associative unital k-algebra, given by left multiplication matrices
struct ArtinianRing {
    Field field;
    int dim = 0;
    Mat unit;              // dim x 1
    std::vector<Mat> L;    // L[i] = left multiplication by basis element i
    bool commutative = true;

    Mat mul(const Mat& x, const Mat& y) const;
    Mat left(const Mat& x) const;   // left multiplication by the element x
    Mat right(const Mat& x) const;  // right multiplication by x
    Mat basis_vec(int i) const;
};
using RingPtr = std::shared_ptr<const ArtinianRing>;

// radical (basis columns) of a commutative Artinian ring, or of any when char is 0 or > dim
Mat radical(const ArtinianRing& R);
// complete set of primitive orthogonal idempotents of a commutative ring, deterministic order
std::vector<Mat> primitive_idempotents(const ArtinianRing& R);
// subring e R e of a commutative ring with basis inclusion (dim R x dim eR)
struct CutRing {
    RingPtr ring;
    Mat incl;  // coordinates in R of the basis of eR
    Mat proj;  // eR-coordinates of e*x
};
CutRing cut_ring(const ArtinianRing& R, const Mat& e);

class DGAlgebra;
using AlgPtr = std::shared_ptr<const DGAlgebra>;

// one block e_t A of a commutative A, a DG algebra on its own
struct Block {
    AlgPtr alg;
    Mat e;     // idempotent in A (dimA x 1), degree 0, central
    Mat incl;  // dimA x dimB, basis of e A
    Mat proj;  // dimB x dimA, x -> coordinates of e x
};

struct H0Data {
    RingPtr ring;
    Mat proj;  // h x dimA, zero outside degree 0
    Mat lift;  // dimA x h, complement representatives in A^0
};

class DGAlgebra {
public:
    struct Term {
        int idx;
        Scalar c;
    };
    struct Input {
        Field field;
        std::string name = "A";
        std::vector<std::string> labels;
        std::vector<int> degrees;
        int unit = 0;
        bool commutative = false;
        std::vector<std::pair<std::pair<int, int>, std::vector<Term>>> mult;  // (a,b) -> sum
        std::vector<std::pair<int, std::vector<Term>>> diff;                 // a -> d(a)
    };
    // sorts the basis by degree (descending, stable) and indexes the tables
    static AlgPtr make(Input in);
    static AlgPtr field_algebra(Field f);

    const Field& field() const { return field_; }
    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(deg_.size()); }
    int degree(int i) const { return deg_[i]; }
    const std::string& label(int i) const { return labels_[i]; }
    int label_index(const std::string& l) const;  // -1 if absent
    int unit() const { return unit_; }
    bool commutative() const { return comm_; }
    int lowest_degree() const;
    // [begin,end) of basis indices in degree n
    std::pair<int, int> range(int n) const;
    int dim_in(int n) const { auto r = range(n); return r.second - r.first; }

    const std::vector<Term>& mult(int a, int b) const { return mult_[static_cast<size_t>(a) * dim() + b]; }
    const Mat& diff() const { return d_; }  // dim x dim
    Mat basis_vec(int i) const;
    Mat unit_vec() const { return basis_vec(unit_); }
    Mat mul(const Mat& x, const Mat& y) const;
    Mat left_mult(const Mat& x) const;  // dim x dim
    Mat left_mult_basis(int a) const;

    // --- derived data, computed once ---
    const H0Data& h0() const;
    // block decomposition along primitive idempotents of H^0 (commutative only; otherwise one block = A)
    std::vector<Block> blocks() const;
    // basis (columns, dimA rows) of the preimage in A^0 of the radical of H^0
    const Mat& radical_lift() const;

    std::vector<Term> mult_raw(int a, int b) const { return mult(a, b); }
    Input to_input() const;

private:
    struct Cache;
    Field field_;
    std::string name_;
    std::vector<std::string> labels_;
    std::vector<int> deg_;
    int unit_ = 0;
    bool comm_ = false;
    std::vector<std::vector<Term>> mult_;
    Mat d_;
    std::shared_ptr<Cache> cache_;
    std::weak_ptr<const DGAlgebra> self_;
};

Report validate(const DGAlgebra& A);

// product algebra A x B (unit = sum of units)
AlgPtr product(const std::vector<AlgPtr>& factors, const std::string& name = "");
// H^0(A) as a DG algebra concentrated in degree 0
AlgPtr h0_algebra(const AlgPtr& A);
// a DG algebra map A -> B given on basis vectors (dimB x dimA)
struct AlgebraMap {
    AlgPtr src, tgt;
    Mat m;
};
Report validate(const AlgebraMap& f);
AlgebraMap h0_projection(const AlgPtr& A);

}  // namespace dginj
