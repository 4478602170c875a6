#include "doctest.h"

#include "dginj/duality.hpp"
#include "dginj/generators.hpp"
#include "dginj/injstruct.hpp"

using namespace dginj;

namespace {
const Field FP = Field::prime(32003);
const Field QQ = Field::rationals();

ModPtr mp(DGModule M) { return std::make_shared<DGModule>(std::move(M)); }
ModPtr E_of(const AlgPtr& A) { return mp(k_dual(regular_module(A))); }
}  // namespace

TEST_CASE("the k-dual of A is a normalized dualizing module") {
    for (Field f : {FP, QQ})
        for (const char* g : {"k", "koszul:x4:x2", "trivext:1:1"}) {
            CAPTURE(std::string(g));
            auto c = is_dualizing(E_of(generate(g, f)));
            CAPTURE(c.to_json().dump());
            CHECK(c.decided);
            CHECK(c.dualizing);
            CHECK(c.normalization_shift == 0);
        }
}

TEST_CASE("normalization shift follows M[n]^i = M^{n+i}") {
    auto A = generate("koszul:x4:x2", FP);
    auto E3 = mp(shift(*E_of(A), 3));
    auto c = is_dualizing(E3);
    CHECK(c.dualizing);
    CHECK(c.normalization_shift == -3);
    auto n = normalize(E3);
    CHECK(n.report.ok());
    CHECK(n.cert.normalization_shift == 0);
    CHECK(n.module->lo() == E_of(A)->lo());
    // already normalized: unchanged
    auto n0 = normalize(E_of(A));
    CHECK(n0.module->total_dim() == E_of(A)->total_dim());
    CHECK(n0.cert.normalization_shift == 0);
}

TEST_CASE("A1 is dualizing over itself") {
    // A1 = E[1]: recorded outcome
    auto A = generate("koszul:x4:x2", FP);
    auto c = is_dualizing(mp(regular_module(A)));
    CAPTURE(c.to_json().dump());
    CHECK(c.decided);
    CHECK(c.dualizing);
    CHECK(c.normalization_shift == -1);
}

TEST_CASE("non-dualizing inputs") {
    auto A = generate("koszul:x4:x2", FP);
    // H0(A1) has unbounded Ext into itself: the injective dimension is not bounded
    auto c = is_dualizing(mp(h0_as_module(A)));
    CHECK_FALSE(c.dualizing);
    // E + E: right degree, wrong module
    auto E = E_of(A);
    auto c2 = is_dualizing(mp(direct_sum({*E, *E})));
    CHECK(c2.decided);
    CHECK_FALSE(c2.dualizing);
    CHECK_FALSE(is_dualizing(mp(DGModule::zero(A))).dualizing);
}

TEST_CASE("product algebras: per-factor shifts") {
    auto P = generate("koszul:x4:x2*k", FP);
    auto E = E_of(P);
    auto c = is_dualizing(E);
    CHECK(c.dualizing);
    CHECK(c.shifts == std::vector<int>{0, 0});
    auto E0 = standard_injective(P, 0).module, E1 = standard_injective(P, 1).module;
    auto R = mp(direct_sum({*E0, shift(*E1, 1)}));
    auto c2 = is_dualizing(R);
    CAPTURE(c2.to_json().dump());
    CHECK(c2.dualizing);
    CHECK_FALSE(c2.shifts_agree);
    CHECK(c2.shifts == std::vector<int>{0, -1});
    auto n = normalize(R);
    CHECK(n.report.ok());
    CHECK(n.cert.shifts == std::vector<int>{0, 0});
}

TEST_CASE("biduality over sampled modules") {
    auto A = generate("koszul:x4:x2", FP);
    auto E = E_of(A);
    int n = 0;
    for (auto& M : sample_modules(A, 77, 20, 8)) {
        auto r = biduality_check(M, E);
        CAPTURE(r.to_json().dump());
        CHECK(r.ok());
        n += r.count(Status::Pass) > 0;
    }
    CHECK(n == 20);
    // the unit also holds for the shifted dualizing module A1 = E[1]
    for (auto& M : sample_modules(A, 78, 3, 8)) CHECK(biduality_check(M, mp(regular_module(A))).ok());
}

TEST_CASE("endomorphism unit and RΓ of the dualizing module") {
    for (const char* g : {"k", "koszul:x4:x2", "koszul:x4:x2*k"}) {
        CAPTURE(std::string(g));
        auto A = generate(g, FP);
        CHECK(endo_unit_check(E_of(A)).ok());
        auto r = rgamma_of_dual_check(E_of(A));
        CAPTURE(r.to_json().dump());
        CHECK(r.ok());
    }
    // completion of E at the maximal ideal is dualizing (complete local case)
    auto A = generate("koszul:x4:x2", FP);
    auto L = derived_completion(E_of(A), maximal_ideal(A, 0));
    CHECK(is_dualizing(L.module).dualizing);
}

TEST_CASE("local duality") {
    for (Field f : {FP, QQ}) {
        auto A = generate("koszul:x4:x2", f);
        auto E = E_of(A);
        auto r = local_duality_verify(mp(regular_module(A)), E);
        CAPTURE(r.to_json().dump());
        CHECK(r.ok());
        CHECK(r.count(Status::Pass) > 0);
        auto rk = local_duality_verify(mp(residue_module(A, 0)), E);
        CHECK(rk.ok());
        for (auto& M : sample_modules(A, 5, 3, 8)) CHECK(local_duality_verify(M, E).ok());
    }
}

TEST_CASE("local duality dimension ledger: A1") {
    auto A = generate("koszul:x4:x2", FP);
    auto E = E_of(A);
    auto R = mp(regular_module(A));
    // H^n_m(A1) = H^n(A1); Ext^{-n}(A1, E) = H^n(A1)^*
    for (int n : {-1, 0}) CHECK(ext(R, E, -n).dim == 2);
    CHECK(hdim(*local_cohomology(R, maximal_ideal(A, 0)).module, 0) == 2);
    CHECK(hdim(*local_cohomology(R, maximal_ideal(A, 0)).module, -1) == 2);
}

TEST_CASE("amplitude of RΓ(A) equals amplitude of R") {
    for (const char* g : {"koszul:x4:x2", "k", "trivext:1:1", "trivext:2:2"}) {
        CAPTURE(std::string(g));
        auto A = generate(g, FP);
        auto r = amp_check(A, E_of(A));
        CAPTURE(r.to_json().dump());
        CHECK(r.ok());
    }
    auto A = generate("koszul:x4:x2", FP);
    auto r = amp_check(A, E_of(A));
    CHECK(r.checks.back().witness["amp_rgamma"] == 1);
}

TEST_CASE("cohomology of the derived endomorphisms of E(A,p)") {
    for (const char* g : {"k", "koszul:x4:x2", "koszul:x4:x2*k"}) {
        auto A = generate(g, FP);
        for (int i = 0; i < static_cast<int>(A->blocks().size()); ++i) {
            CAPTURE(std::string(g));
            CAPTURE(i);
            auto r = endo_cohomology_of_E(A, i);
            CAPTURE(r.to_json().dump());
            CHECK(r.ok());
        }
    }
}

TEST_CASE("local cohomology is artinian") {
    auto A = generate("koszul:x4:x2", FP);
    auto r = artinian_cohomology_check(mp(regular_module(A)), maximal_ideal(A, 0));
    CHECK(r.ok());
    CHECK(r.checks[0].witness["lengths"].size() > 0);
    auto P = generate("koszul:x4:x2*k", FP);
    CHECK(artinian_cohomology_check(mp(regular_module(P)), maximal_ideal(P, 1)).ok());
    CHECK(artinian_cohomology_check(mp(h0_as_module(P)), jacobson_ideal(P)).ok());
}
