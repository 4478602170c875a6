#pragma once
// dualizing DG-modules, normalization, local duality and the E(A,p) endomorphism identity
#include <vector>

#include "dginj/localcoh.hpp"

namespace dginj {

struct DualizingCertificate {
    bool dualizing = false;
    bool decided = false;        // false when the injective dimension could not be bounded
    ModPtr R;
    InjDim injdim;
    std::vector<int> shifts;     // per local factor: the degree d with Ext^d(k, RHom(H0,R)) = k
    int normalization_shift = 0; // common value of shifts (first factor when they differ)
    bool shifts_agree = true;
    Report report;
    json to_json() const;
};
// samples: number of sampled modules for the biduality check
DualizingCertificate is_dualizing(const ModPtr& R, int samples = 4, uint64_t seed = 1);
// R shifted factor by factor so that every normalization shift is 0
struct Normalized {
    ModPtr module;
    DualizingCertificate cert;
    Report report;
};
Normalized normalize(const ModPtr& R, int samples = 4);

// the unit M -> RHom(RHom(M,R),R) on resolutions, checked on cohomology
Report biduality_check(const ModPtr& M, const ModPtr& R);
// A -> RHom(R,R), a -> a.id
Report endo_unit_check(const ModPtr& R);
// RΓ_{m_i}(R) = E(A,m_i) for every local factor
Report rgamma_of_dual_check(const ModPtr& R);

Report local_duality_verify(const ModPtr& M, const ModPtr& R, uint64_t seed = 3);
Report amp_check(const AlgPtr& A, const ModPtr& R);
Report endo_cohomology_of_E(const AlgPtr& A, int i);
Report artinian_cohomology_check(const ModPtr& M, const IdealSpec& a);

}  // namespace dginj
