#pragma once
// DG modules, strict chain maps, H^0-modules and the basic constructions on them
#include <memory>
#include <optional>
#include <vector>

#include "dginj/algebra.hpp"

namespace dginj {

class DGModule {
public:
    DGModule() = default;
    // zero differential and zero action; degrees lo..lo+dims.size()-1
    DGModule(AlgPtr A, int lo, std::vector<int> dims);
    static DGModule zero(AlgPtr A);

    const AlgPtr& algebra() const { return A_; }
    const Field& field() const { return A_->field(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
    int dim(int n) const;
    int total_dim() const;
    bool is_zero_space() const { return total_dim() == 0; }

    Mat diff(int n) const;                 // M^n -> M^{n+1}
    Mat action(int a, int n) const;        // basis element a: M^n -> M^{n+|a|}
    Mat action_elem(const Mat& x, int s, int n) const;  // homogeneous x of degree s
    void set_diff(int n, const Mat& m);
    void set_action(int a, int n, const Mat& m);

    // lowest / highest degree with a nonzero component (empty space: lo() > hi())
    int lowest_nonzero() const;
    int highest_nonzero() const;

private:
    AlgPtr A_;
    int lo_ = 0;
    std::vector<int> dims_;
    std::vector<Mat> d_;
    std::vector<std::vector<Mat>> act_;  // [a][n - lo]
};
using ModPtr = std::shared_ptr<const DGModule>;

Report validate(const DGModule& M);

struct ChainMap {
    ModPtr src, tgt;
    std::vector<Mat> m;  // indexed by src degree - src->lo()
    Mat at(int n) const;
    void set(int n, const Mat& f);
};
ChainMap make_chain_map(ModPtr src, ModPtr tgt);  // zero map
ChainMap identity_map(ModPtr M);
ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap scale(const ChainMap& f, const Scalar& s);
Report validate(const ChainMap& f);

// modules over the Artinian ring H^0(A)
struct H0Module {
    RingPtr ring;
    int dim = 0;
    std::vector<Mat> act;  // one per ring basis element
    Mat act_elem(const Mat& x) const;
};
Report validate(const H0Module& M);
// basis of Hom_R(M,N) as dimN x dimM matrices
std::vector<Mat> hom_basis(const H0Module& M, const H0Module& N);
int hom_dim(const H0Module& M, const H0Module& N);
bool is_equivariant(const Mat& f, const H0Module& M, const H0Module& N);
// an invertible R-linear map M -> N if the two are isomorphic
std::optional<Mat> find_isomorphism(const H0Module& M, const H0Module& N);
H0Module direct_sum(const H0Module& M, const H0Module& N);
H0Module regular_module(RingPtr R);
// restriction of scalars along a ring map S -> R (dimR x dimS)
H0Module restrict_scalars(const H0Module& M, RingPtr S, const Mat& phi);

// ---- cohomology ----
Subquotient cohomology_space(const DGModule& M, int n);
H0Module cohomology(const DGModule& M, int n);
int hdim(const DGModule& M, int n);
std::vector<int> hdims(const DGModule& M, int lo, int hi);
Mat induced_on_cohomology(const ChainMap& f, int n);
bool is_acyclic(const DGModule& M);
bool is_quasi_iso(const ChainMap& f);

struct Amplitude {
    bool empty = true;  // acyclic
    int inf = 0, sup = 0;
    int amp() const { return empty ? 0 : sup - inf; }
};
Amplitude inf_sup_amp(const DGModule& M);

// ---- constructions ----
DGModule regular_module(const AlgPtr& A);
DGModule shift(const DGModule& M, int s);
ChainMap shift(const ChainMap& f, int s);
DGModule cone(const ChainMap& f);
// inclusion N -> cone(f) and projection cone(f) -> M[1]
ChainMap cone_inclusion(const ChainMap& f, ModPtr C);
ChainMap cone_projection(const ChainMap& f, ModPtr C);
DGModule direct_sum(const std::vector<DGModule>& Ms);
// inclusion / projection for summand i
ChainMap sum_inclusion(const std::vector<ModPtr>& Ms, ModPtr S, size_t i);
ChainMap sum_projection(const std::vector<ModPtr>& Ms, ModPtr S, size_t i);
DGModule k_dual(const DGModule& M);
ChainMap k_dual(const ChainMap& f, ModPtr srcDual, ModPtr tgtDual);  // f^*: N^* -> M^*

struct Truncation {
    ModPtr module;
    ChainMap map;  // inclusion (le) or projection (gt)
};
Truncation smart_truncate_le(const ModPtr& M, int n);
Truncation smart_truncate_gt(const ModPtr& M, int n);
// long-exact-sequence dimension ledger of the truncation triangle
Report truncation_triangle_check(const ModPtr& M, int n);

// an H^0-module viewed as a DG module in degree 0
DGModule module_from_h0(const AlgPtr& A, const H0Module& M);
// H^0(A) as an A-module
DGModule h0_as_module(const AlgPtr& A);
// ring maps H^0(A) -> k, one per local factor (1 x h rows), in block order
std::vector<Mat> residue_characters(const AlgPtr& A);
H0Module residue_h0(const AlgPtr& A, int t);
// residue field of local factor t as an A-module
DGModule residue_module(const AlgPtr& A, int t);
// e_t M (cut by a central degree-0 idempotent of A, given as a dimA vector)
struct Cut {
    ModPtr module;
    ChainMap incl, proj;
};
Cut cut_module(const ModPtr& M, const Mat& e);
// change the algebra of an A-module along the block projection A -> A_t, for M with e_t M = M
DGModule restrict_to_block(const DGModule& M, const Block& b);
// extend a block module back to A (A acts through the projection)
DGModule extend_from_block(const DGModule& M, const AlgPtr& A, const Block& b);
// restriction along an algebra map f: A -> B of a B-module
DGModule restrict_along(const DGModule& N, const AlgebraMap& f);

}  // namespace dginj
