#pragma once
// structure of Inj(A): local factors of H^0(A), localization, the standard
// injectives E(A,p), decomposition, cogenerators, endomorphism rings, H^0-equivalence
#include <utility>
#include <vector>

#include "dginj/derivedfun.hpp"

namespace dginj {

struct LocalFactor {
    RingPtr ring;    // e R
    Mat max_ideal;   // basis (columns in e R coordinates)
    int residue_dim = 1;
    int nilpotency = 0;  // smallest m with m^m = 0
};
struct SemilocalDecomposition {
    RingPtr ring;                 // H^0(A)
    std::vector<Mat> idempotents; // in H^0(A)
    std::vector<LocalFactor> factors;
    int size() const { return static_cast<int>(idempotents.size()); }
};
SemilocalDecomposition decompose_h0(const AlgPtr& A);
Report validate(const SemilocalDecomposition& D);

struct Localization {
    AlgPtr algebra;  // e_i A
    AlgebraMap map;  // A -> e_i A
    Block block;
};
Localization localize(const AlgPtr& A, int i);
// e_i M as a module over e_i A
DGModule localize_module(const ModPtr& M, int i);
// e_i M as an A-module with the projection M -> e_i M
Cut localize_in_place(const ModPtr& M, int i);

// H^0-level helpers
H0Module cut_h0(const H0Module& M, const Mat& e);
H0Module socle(const H0Module& M);
// the injective hull of the i-th residue field as an H^0(A)-module
H0Module standard_injective_h0(const AlgPtr& A, int i);

struct StandardInjective {
    int prime = 0;
    ModPtr module;
    InjCertificate cert;
    Report report;
};
StandardInjective standard_injective(const AlgPtr& A, int i);
// E(A,p_1)^{m_1} + ... (in factor order)
ModPtr injective_of_type(const AlgPtr& A, const std::vector<int>& mult);

struct InjDecomposition {
    std::vector<std::pair<int, int>> mult;  // (prime index, multiplicity), nonzero only
    ModPtr reconstruction;
    Report report;  // reconstruction quasi-isomorphic to the input
};
InjDecomposition decompose_injective(const ModPtr& I);

Report noetherian_criterion(const AlgPtr& A);
ModPtr minimal_cogenerator(const AlgPtr& A);
Report cogenerator_check(const ModPtr& E, const std::vector<ModPtr>& samples);

// the algebra H^0(RHom(I,I)) under composition (ring basis = classes)
struct EndoAlgebra {
    RingPtr ring;
    std::vector<DerivedMorphism> basis;
};
EndoAlgebra endomorphism_algebra(const ModPtr& I);
Report endo_local_test(const ModPtr& I);

// splitting of an idempotent endomorphism of an injective, given on H^0
struct IdemSplitting {
    ModPtr X;
    DerivedMorphism incl, proj;  // X -> I, I -> X
};
IdemSplitting split_idempotent(const ModPtr& I, const Mat& ebar, bool reverse_pivots);
Report idempotent_splitting_check(const ModPtr& I, const Mat& ebar);

Report summand_closure_check(const ModPtr& I, const ModPtr& J);
Report localization_iso_check(const AlgPtr& A);
Report h0_equivalence_suite(const AlgPtr& A, int max_mult = 2);

}  // namespace dginj
