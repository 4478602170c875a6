#pragma once
// RHom / tensor in the derived category, Ext/Tor, injective dimension, the
// membership test for Inj(A), and the morphism-level checks built on them
#include <optional>
#include <string>

#include "dginj/resolve.hpp"

namespace dginj {

using ResPtr = std::shared_ptr<const SemiFreeResolution>;

// memoized resolution (the floor is clipped to inf(M))
ResPtr resolve(const ModPtr& M, int floor);
// floor making Hom(P_M, N) exact in degrees <= imax
int hom_floor(const ModPtr& M, const ModPtr& N, int imax);
int lowest_or(const DGModule& M, int fallback);

// phi in Hom(P,N)^i evaluated on P^m (N^{m+i} x P^m)
Mat hom_eval(const HomComplex& H, const Mat& phi, int i, int m);
// w_* : Hom(P,X)^i -> Hom(P,Y)^i for a strict map w: X -> Y
Mat postcompose(const HomComplex& HX, const HomComplex& HY, const ChainMap& w, int i);
// psi^* : Hom(P',X)^i -> Hom(P,X)^i for a strict map psi: P -> P'
Mat precompose(const HomComplex& Hp, const HomComplex& H, const ChainMap& psi, int i);
// the chain map of complexes Hom(P,X) -> Hom(P,Y) induced by w
ChainMap postcompose_map(const HomComplex& HX, const HomComplex& HY, const ChainMap& w);
// lift f: P_M -> N through pi_N: returns g: P_M -> P_N with pi_N g homotopic to f
std::optional<ChainMap> lift_through(const ChainMap& f, const SemiFreeResolution& RM, const SemiFreeResolution& RN);

// a morphism M -> N in D(A), as a degree-0 cycle of Hom(P_M, N)
struct DerivedMorphism {
    ResPtr res;
    ModPtr tgt;
    std::shared_ptr<const HomComplex> hom;
    Mat cycle;
    ModPtr src() const { return res->target; }
    ChainMap on_resolution() const { return hom_cycle_to_map(*hom, cycle); }
};
DerivedMorphism derived(const ResPtr& R, const ModPtr& tgt, const Mat& cycle);
DerivedMorphism derived_from_map(const ResPtr& R, const ChainMap& f);  // f: src -> tgt strict
DerivedMorphism derived_identity(const ResPtr& R);
// H^n(f) in the cohomology bases of src and tgt
Mat derived_on_cohomology(const DerivedMorphism& f, int n);
bool derived_equal(const DerivedMorphism& f, const DerivedMorphism& g);
bool is_zero(const DerivedMorphism& f);
// the same morphism on a deeper resolution of its source (R2->floor < f.res->floor)
DerivedMorphism rebase(const DerivedMorphism& f, const ResPtr& R2);
// g after f; g is rebased when its resolution is not deeper than f's
DerivedMorphism compose(const DerivedMorphism& g, const DerivedMorphism& f);

// Ext^i_A(M,N) = H^i RHom(M,N) and Tor^i_A(M,N) = H^{-i}(M tensor^L N)
H0Module ext(const ModPtr& M, const ModPtr& N, int i);
H0Module tor(const ModPtr& M, const ModPtr& N, int i);

// injective dimension: exact when decided, otherwise value is a lower bound
struct InjDim {
    bool zero = false;  // M acyclic: -infinity
    bool decided = false;
    int value = 0;
    json witness;
    std::string str() const;
};
// through H^0(A): the Matlis dual of RHom(H^0(A),M) is H^0(A) tensor^L M^*, whose minimal
// free complex over H^0(A) is H^0(A) tensor_A Q (Q minimal over A); its projective dimension
// is read off from Q tensor_A k_t
InjDim inj_dim(const ModPtr& M, int depth = 6);
// directly: max of i + inf(N) over Ext^i(N,M) != 0, N in the list plus the residue fields
InjDim inj_dim_direct(const ModPtr& M, const std::vector<ModPtr>& Ns, int reach);

enum class Verdict { Yes, No, Zero, Undecided };
const char* verdict_name(Verdict v);
struct InjCertificate {
    Verdict verdict = Verdict::Undecided;
    int inf = 0;
    bool h0_injective = false;
    std::vector<int> window;  // degrees where Ext^i(H^0(A),M) was certified
    InjDim injdim;
    json witness;
    json to_json() const;
};
InjCertificate is_inj_object(const ModPtr& M, int depth = 4);

// ---- checks ----
Report rhom_reflects_iso_check(const ChainMap& f, int depth = 3);

struct Alpha {
    DerivedMorphism alpha;
    ModPtr h0;  // H^0(M) as a module in degree 0
    Report report;
};
Alpha alpha_map(const ModPtr& M);

// H^n(RHom(M,I)) -> Hom_{H^0}(H^{-n}M, H^0 I) built from the resolution of M
class Phi {
public:
    Phi(const ResPtr& R, const ModPtr& I, int n);
    int n() const { return n_; }
    const HomComplex& hom() const { return *H_; }
    std::shared_ptr<const HomComplex> hom_ptr() const { return H_; }
    const Subquotient& classes() const { return S_; }  // H^n of the Hom complex
    // the induced map on cohomology of a degree-n cycle (dim H^0 I x dim H^{-n} M)
    Mat eval(const Mat& cycle) const;
    // matrix of Phi in the bases H^n(RHom) -> hom_basis
    Mat matrix() const;
    const std::vector<Mat>& target_basis() const { return basis_; }
    const H0Module& source_module() const { return X_; }
    const H0Module& target_module() const { return Y_; }
    Report check() const;  // square, invertible, lands in H^0-linear maps, equivariant

private:
    ResPtr R_;
    ModPtr I_;
    int n_;
    std::shared_ptr<const HomComplex> H_;
    Subquotient S_;       // H^n of the Hom complex
    Mat back_;            // H^{-n}(M) -> representatives in P^{-n}
    Subquotient SI_;      // H^0(I)
    H0Module X_, Y_;
    std::vector<Mat> basis_;
};
Report phi_naturality_in_M(const ChainMap& u, const ModPtr& I, int n);  // u: M -> M'
Report phi_naturality_in_I(const ModPtr& M, const ChainMap& w, int n);  // w: I -> J

Report cohdim_zero_check(const ModPtr& I, const std::vector<ModPtr>& samples);
Report cat_char_surjectivity(const ModPtr& I, const ChainMap& f);
struct Splitting {
    Report report;
    std::optional<DerivedMorphism> g;
};
Splitting split_mono_test(const ChainMap& f);  // f: I -> M
struct Lifted {
    Report report;
    std::optional<DerivedMorphism> f;
};
Lifted lift_morphism_through_h0(const ModPtr& I, const ModPtr& J, const Mat& fbar);

// B tensor_A P for an algebra map F: A -> B (B-module)
DGModule base_change(const SemiFreeResolution& R, const AlgebraMap& F);
struct Restricted {
    ModPtr module;  // RHom_A(B, I) as a B-module
    bool exact = false;
    InjCertificate cert;
};
Restricted restrict_inj_along_map(const AlgebraMap& F, const ModPtr& I, int depth = 4);

}  // namespace dginj
