#include "doctest.h"

#include "dginj/generators.hpp"
#include "dginj/resolve.hpp"

using namespace dginj;

namespace {
const Field FP = Field::prime(32003);
const Field QQ = Field::rationals();

ModPtr mp(DGModule M) { return std::make_shared<DGModule>(std::move(M)); }

// conjugate an H0Module by a random invertible matrix
H0Module scramble(const H0Module& M, Rng& rng) {
    const Field f = M.ring->field;
    for (;;) {
        Mat S = rng.mat(f, M.dim, M.dim, 70);
        auto Si = inverse(S);
        if (!Si) continue;
        H0Module N{M.ring, M.dim, {}};
        for (auto& a : M.act) N.act.push_back(S * a * *Si);
        return N;
    }
}
}  // namespace

TEST_CASE("free module resolves to itself") {
    for (const char* g : {"k", "koszul:x4:x2", "koszul:x4:x2*k"}) {
        auto A = generate(g, FP);
        auto M = mp(regular_module(A));
        auto R = semifree_resolve(M, -4);
        CHECK(R.complete);
        CHECK(certify(R).ok());
        CHECK(R.generators() == static_cast<int>(A->blocks().size()));
        CHECK(is_quasi_iso(R.pi));
    }
}

TEST_CASE("zero module resolves to zero") {
    auto A = generate("koszul:x4:x2", FP);
    auto R = semifree_resolve(mp(DGModule::zero(A)), -3);
    CHECK(R.generators() == 0);
    CHECK(R.complete);
    auto R2 = semifree_resolve(mp(cone(identity_map(mp(regular_module(A))))), -3);
    CHECK(R2.generators() == 0);
}

TEST_CASE("resolution of H0(A1) is certified down to the floor") {
    auto A = generate("koszul:x4:x2", FP);
    auto H = mp(h0_as_module(A));
    auto R = semifree_resolve(H, -6);
    CHECK(certify(R).ok());
    CHECK_FALSE(R.complete);
    CHECK(R.generator_counts().begin()->first == 0);
    CHECK(R.generator_counts().begin()->second == 1);
    // lowering the floor only adds generators below the old floor
    auto R2 = semifree_resolve(H, -8);
    for (auto [d, c] : R.generator_counts())
        if (d >= -6) CHECK(R2.generator_counts()[d] == c);
    MESSAGE("generator counts of H0(A1): " << [&] {
        std::string s;
        for (auto [d, c] : R2.generator_counts()) s += std::to_string(d) + ":" + std::to_string(c) + " ";
        return s;
    }());
}

TEST_CASE("floor above inf is an error") {
    auto A = generate("koszul:x4:x2", FP);
    CHECK_THROWS_AS(semifree_resolve(mp(regular_module(A)), 0), Error);
}

TEST_CASE("Hom out of a free resolution of A is N") {
    auto A = generate("koszul:x4:x2", FP);
    auto R = semifree_resolve(mp(regular_module(A)), -2);
    for (auto& N : sample_modules(A, 11, 15)) {
        auto H = hom_complex(R, N);
        CHECK(validate(*H.C).ok());
        for (int i = N->lo() - 2; i <= N->hi() + 2; ++i) {
            REQUIRE(H.certified(i));
            CHECK(hdim(*H.C, i) == hdim(*N, i));
        }
    }
}

TEST_CASE("Hom(H0(A1), E1) in degree 0 has dim 2") {
    auto A = generate("koszul:x4:x2", FP);
    auto E = mp(k_dual(regular_module(A)));
    auto R = semifree_resolve(mp(h0_as_module(A)), -4);
    auto H = hom_complex(R, E);
    REQUIRE(H.certified(0));
    // oracle: Hom_{H0}(H0(A1), H0(E1)) computed over the ring
    int oracle = hom_dim(regular_module(A->h0().ring), cohomology(*E, 0));
    CHECK(oracle == 2);
    CHECK(hdim(*H.C, 0) == oracle);
    for (int i = -3; i <= 3; ++i)
        if (i != 0 && H.certified(i)) CHECK(hdim(*H.C, i) == 0);
}

TEST_CASE("Hom into zero is zero") {
    auto A = generate("koszul:x4:x2", FP);
    auto R = semifree_resolve(mp(h0_as_module(A)), -3);
    auto H = hom_complex(R, mp(DGModule::zero(A)));
    CHECK(H.C->total_dim() == 0);
}

TEST_CASE("Ext into a k-dual equals the dual of Tor (adjunction oracle)") {
    for (Field f : {FP, QQ})
        for (const char* g : {"koszul:x4:x2", "koszul:x4:x2*k", "trivext:1:1"}) {
            auto A = generate(g, f);
            auto samples = sample_modules(A, 21, 8, 12);
            for (size_t s = 0; s + 1 < samples.size(); ++s) {
                auto M = samples[s], N = samples[s + 1];
                auto Nd = mp(k_dual(*N));
                int floor = std::min(M->lowest_nonzero(), Nd->lowest_nonzero()) - 4;
                auto amp = inf_sup_amp(*M);
                if (!amp.empty) floor = std::min(floor, amp.inf);
                auto R = semifree_resolve(M, floor);
                REQUIRE(certify(R).ok());
                auto H = hom_complex(R, Nd);
                auto T = tensor_complex(R, N);
                CHECK(validate(*H.C).ok());
                CHECK(validate(*T.C).ok());
                for (int i = -4; i <= 4; ++i)
                    if (H.certified(i) && T.certified(-i)) CHECK(hdim(*H.C, i) == hdim(*T.C, -i));
            }
        }
}

TEST_CASE("tensor is balanced") {
    auto A = generate("koszul:x4:x2", FP);
    auto samples = sample_modules(A, 5, 10, 12);
    for (size_t s = 0; s + 1 < samples.size(); ++s) {
        auto M = samples[s], N = samples[s + 1];
        int floor = std::min(M->lowest_nonzero(), N->lowest_nonzero()) - 5;
        auto RM = semifree_resolve(M, floor);
        auto RN = semifree_resolve(N, floor);
        auto T1 = tensor_complex(RM, N);
        auto T2 = tensor_complex(RN, M);
        for (int n = -3; n <= 3; ++n)
            if (T1.certified(n) && T2.certified(n)) CHECK(hdim(*T1.C, n) == hdim(*T2.C, n));
    }
}

TEST_CASE("Tor of H0(A1) with itself") {
    // H(A1) = k[x]/(x^2) tensor exterior(eps), |eps| = -1: Tor lives in even degrees
    auto A = generate("koszul:x4:x2", FP);
    auto H = mp(h0_as_module(A));
    auto R = semifree_resolve(H, -6);
    auto T = tensor_complex(R, H);
    REQUIRE(T.certified(-4));
    for (int n = -4; n <= 0; ++n) CHECK(hdim(*T.C, n) == (n % 2 == 0 ? 2 : 0));
    // Tor(H0, k) from either side: one class per generator in even degrees
    auto k = mp(residue_module(A, 0));
    auto Rk = semifree_resolve(k, -6);
    auto T1 = tensor_complex(R, k), T2 = tensor_complex(Rk, H);
    for (int n = -4; n <= 0; ++n) {
        REQUIRE(T2.certified(n));
        CHECK(hdim(*T1.C, n) == (n % 2 == 0 ? 1 : 0));
        CHECK(hdim(*T2.C, n) == hdim(*T1.C, n));
    }
}

TEST_CASE("window soundness: a lower floor never changes certified values") {
    for (const char* g : {"koszul:x4:x2", "koszul:x4:x2*k"}) {
        auto A = generate(g, FP);
        auto samples = sample_modules(A, 77, 21, 10);
        for (size_t s = 0; s + 1 < samples.size(); ++s) {
            auto M = samples[s], N = samples[s + 1];
            auto amp = inf_sup_amp(*M);
            int floor = amp.empty ? -1 : amp.inf - 1;
            auto R1 = semifree_resolve(M, floor);
            auto R2 = semifree_resolve(M, floor - 3);
            auto H1 = hom_complex(R1, N), H2 = hom_complex(R2, N);
            for (int i = -6; i <= 6; ++i)
                if (H1.certified(i)) CHECK(hdim(*H1.C, i) == hdim(*H2.C, i));
        }
    }
}

TEST_CASE("derived morphisms: chain maps and Hom cycles correspond") {
    auto A = generate("koszul:x4:x2", FP);
    auto E = mp(k_dual(regular_module(A)));
    auto R = semifree_resolve(mp(h0_as_module(A)), -3);
    auto H = hom_complex(R, E);
    Mat Z = kernel_basis(H.C->diff(0));
    for (int c = 0; c < Z.cols(); ++c) {
        ChainMap m = hom_cycle_to_map(H, Z.col(c));
        CHECK(validate(m).ok());
        CHECK(map_to_hom_element(H, m) == Z.col(c));
    }
}

TEST_CASE("minimal free resolutions over H0") {
    auto A = generate("koszul:x4:x2", FP);
    RingPtr R = A->h0().ring;
    H0Module k = residue_h0(A, 0);
    auto F = minimal_free_resolution(k, 6);
    CHECK(validate(F).ok());
    CHECK(F.betti() == std::vector<int>{1, 1, 1, 1, 1, 1});
    CHECK_FALSE(F.finite);
    auto G = minimal_free_resolution(regular_module(R), 4);
    CHECK(G.finite);
    CHECK(G.proj_dim() == 0);
    CHECK(G.betti() == std::vector<int>{1});
    CHECK(is_projective(regular_module(R)));
    CHECK_FALSE(is_projective(k));
    // Betti numbers do not depend on the basis
    Rng rng(3);
    auto P = generate("koszul:x4:x2*k", FP);
    auto samples = sample_modules(P, 8, 10);
    for (auto& M : samples) {
        H0Module h = cohomology(*M, M->lowest_nonzero());
        auto b1 = minimal_free_resolution(h, 4);
        auto b2 = minimal_free_resolution(scramble(h, rng), 4);
        CHECK(validate(b1).ok());
        CHECK(b1.betti() == b2.betti());
        CHECK(b1.gens == b2.gens);
    }
}

TEST_CASE("Matlis duality") {
    auto A = generate("koszul:x4:x2", FP);
    RingPtr R = A->h0().ring;
    H0Module k = residue_h0(A, 0);
    CHECK(matlis_dual(k).dim == 1);
    CHECK(find_isomorphism(matlis_dual(k), k).has_value());
    H0Module Rm = regular_module(R);
    CHECK(validate(matlis_dual(Rm)).ok());
    // k[x]/(x^2) is self-injective
    CHECK(find_isomorphism(matlis_dual(Rm), Rm).has_value());
    CHECK(is_injective(Rm));
    CHECK_FALSE(is_injective(direct_sum(Rm, k)));
    for (auto& M : sample_modules(A, 4, 10)) {
        H0Module h = cohomology(*M, 0);
        CHECK(matlis_dual(h).dim == h.dim);
        CHECK(validate(matlis_dual(h)).ok());
        auto dd = matlis_dual(matlis_dual(h));
        CHECK(dd.act.size() == h.act.size());
        for (size_t i = 0; i < h.act.size(); ++i) CHECK(dd.act[i] == h.act[i]);
    }
}
