#pragma once
// telescopes, derived torsion RΓ_a and derived completion LΛ_a, with the
// Greenlees–May / MGM / tensor-evaluation / swap checks
//
// At this scale every element of A^0 acts on a finite module with a Fitting
// decomposition, so RΓ_a(M) and LΛ_a(M) are both the summand e_a M where e_a is the
// sum of the block idempotents of the local factors containing a.  That summand is
// what the functions return; the telescope is built literally and used as an
// independent witness (colimit / limit read off the transition maps between stages).
#include <vector>

#include "dginj/derivedfun.hpp"

namespace dginj {

struct IdealSpec {
    AlgPtr algebra;
    std::vector<Mat> gens;   // in H^0(A) coordinates
    std::vector<Mat> lifts;  // in A, degree 0 (complement representatives)
    std::string label;
};
IdealSpec make_ideal(const AlgPtr& A, const std::vector<Mat>& gens, std::string label = "");
IdealSpec zero_ideal(const AlgPtr& A);
IdealSpec unit_ideal(const AlgPtr& A);
IdealSpec maximal_ideal(const AlgPtr& A, int i);  // the i-th maximal ideal of H^0(A)
IdealSpec jacobson_ideal(const AlgPtr& A);        // the radical of H^0(A)
// local factors i with a ⊆ m_i, and the sum of their block idempotents (in A)
std::vector<int> support(const IdealSpec& a);
Mat torsion_idempotent(const IdealSpec& a);
// smallest k with rank(x^k) = rank(x^{k+1}) on M, x of degree 0
int fitting_index(const ModPtr& M, const Mat& x);

// ---- telescopes ----
// Tel(A;a) at the given stage: one tensor factor per generator
struct Telescope {
    AlgPtr algebra;
    std::vector<Mat> elements;
    std::vector<int> stages;
    ModPtr module;
    ChainMap u;  // Tel -> A, delta_0 (x) ... -> 1
};
Telescope telescope(const IdealSpec& a, int stage);
// Tel_N (x) X and Hom(Tel_N, X) with their structure maps
struct TelTensor {
    ModPtr module;
    ChainMap u;  // -> X
};
TelTensor tel_tensor(const std::vector<Mat>& elems, const std::vector<int>& stages, const ModPtr& X);
struct TelHom {
    ModPtr module;
    ChainMap tau;  // X ->
};
TelHom tel_hom(const std::vector<Mat>& elems, const std::vector<int>& stages, const ModPtr& X);
// Tel_N (x) X -> Tel_N' (x) Y induced by g: X -> Y (N <= N' componentwise)
ChainMap tel_tensor_map(const std::vector<Mat>& elems, const std::vector<int>& N, const std::vector<int>& N2,
                        const ChainMap& g, const ModPtr& src, const ModPtr& tgt);
// Hom(Tel_N', X) -> Hom(Tel_N, Y) induced by g: X -> Y (restriction to the smaller stage)
ChainMap tel_hom_map(const std::vector<Mat>& elems, const std::vector<int>& N2, const std::vector<int>& N,
                     const ChainMap& g, const ModPtr& src, const ModPtr& tgt);
// Tel(A;a) (x)_A B against Tel(B;b) for B = H^0(A)
Report telescope_base_change_check(const IdealSpec& a, int stage);
// u is a quasi-isomorphism in the colimit when a acts nilpotently, and the
// colimit of Tel_N (x) M is zero for the unit ideal
Report telescope_colimit_check(const IdealSpec& a, const ModPtr& M);

// ---- RΓ and LΛ ----
struct Torsion {
    ModPtr module;
    ChainMap sigma;  // RΓ_a M -> M
    std::vector<int> stages;
    Report report;   // stabilization and agreement with the telescope
};
Torsion local_cohomology(const ModPtr& M, const IdealSpec& a);
struct Completion {
    ModPtr module;
    ChainMap tau;  // M -> LΛ_a M
    std::vector<int> stages;
    Report report;
};
Completion derived_completion(const ModPtr& M, const IdealSpec& a);

// every H^n(M) is a-torsion
bool is_torsion(const ModPtr& M, const IdealSpec& a);

Report gm_duality_check(const ModPtr& M, const ModPtr& N, const IdealSpec& a, int width = 3);
Report mgm_check(const ModPtr& M, const IdealSpec& a);
Report tensor_eval_check(const ModPtr& M, const ModPtr& N, const ModPtr& K, int width = 3);
Report rgamma_rhom_swaps(const ModPtr& M, const ModPtr& N, const IdealSpec& a, int width = 3);

// invariants over all factor pairs / sampled injectives
Report torsion_dichotomy_check(const AlgPtr& A);
Report rgamma_of_inj_check(const AlgPtr& A, const std::vector<IdealSpec>& ideals);
Report torsion_test_check(const ModPtr& M, const IdealSpec& a);

}  // namespace dginj
