#include "doctest.h"

#include "dginj/generators.hpp"
#include "dginj/module.hpp"

using namespace dginj;

namespace {
const Field FP = Field::prime(32003);
const Field QQ = Field::rationals();

AlgPtr A1(Field f = FP) { return koszul_x(f, 4, 2); }

// rebuild A1 from its tables with one edit applied
AlgPtr mutate(const AlgPtr& A, const std::function<void(DGAlgebra::Input&)>& edit) {
    auto in = A->to_input();
    edit(in);
    return DGAlgebra::make(in);
}

bool has_witness(const Report& r, const std::string& check, const json& w) {
    for (auto& c : r.checks)
        if (c.name == check && c.status == Status::Fail && c.witness.contains("at") && c.witness["at"] == w) return true;
    return false;
}
}  // namespace

TEST_CASE("validate base field and A1") {
    CHECK(validate(*DGAlgebra::field_algebra(FP)).ok());
    auto A = A1();
    CHECK(A->dim() == 8);
    CHECK(A->lowest_degree() == -1);
    CHECK(validate(*A).ok());
    CHECK(validate(*A1(QQ)).ok());
}

TEST_CASE("mutations are caught with a witness") {
    auto A = A1();
    // drop d(xe) = x^3: Leibniz breaks first at (x, e), since d(x e) = 0 but x d(e) = x^3
    auto dropped = mutate(A, [&](DGAlgebra::Input& in) {
        int xe = A->label_index("xe");
        for (auto& d : in.diff)
            if (d.first == xe) d.second.clear();
    });
    Report r = validate(*dropped);
    CHECK_FALSE(r.ok());
    CHECK(has_witness(r, "leibniz", json::array({"x", "e"})));
    // flip d(e) = -x^2 only: again (x, e) is the first failing pair
    auto flipped = mutate(A, [&](DGAlgebra::Input& in) {
        int e = A->label_index("e");
        for (auto& d : in.diff)
            if (d.first == e)
                for (auto& t : d.second) t.c = -t.c;
    });
    Report r2 = validate(*flipped);
    CHECK_FALSE(r2.ok());
    CHECK(has_witness(r2, "leibniz", json::array({"x", "e"})));
    // break associativity: x*x2 = 0 while x2*x = x3
    auto nonassoc = mutate(A, [&](DGAlgebra::Input& in) {
        int x = A->label_index("x"), x2 = A->label_index("x2");
        for (auto& m : in.mult)
            if (m.first == std::make_pair(x, x2)) m.second.clear();
    });
    CHECK_FALSE(validate(*nonassoc).ok());
}

TEST_CASE("cohomology of A1") {
    auto A = A1();
    DGModule M = regular_module(A);
    CHECK(validate(M).ok());
    H0Module h0 = cohomology(M, 0);
    H0Module hm1 = cohomology(M, -1);
    // H^0 = k[x]/(x^4) / (x^2): dim 2; H^-1 = ann(x^2) = (x^2, x^3): dim 2
    CHECK(h0.dim == 2);
    CHECK(hm1.dim == 2);
    CHECK(hdim(M, 1) == 0);
    CHECK(hdim(M, -2) == 0);
    // H^-1 is isomorphic to H^0 as a module
    CHECK(find_isomorphism(h0, hm1).has_value());
    CHECK(hdim(DGModule::zero(A), 0) == 0);
    auto a = inf_sup_amp(M);
    CHECK_FALSE(a.empty);
    CHECK(a.inf == -1);
    CHECK(a.sup == 0);
    CHECK(a.amp() == 1);
}

TEST_CASE("H0 ring of A1 is k[x]/(x^2)") {
    auto A = A1();
    const auto& R = *A->h0().ring;
    CHECK(R.dim == 2);
    CHECK(radical(R).cols() == 1);
    Mat x = radical(R);
    CHECK(R.mul(x, x).is_zero());
    CHECK_FALSE(x.is_zero());
    auto H = h0_algebra(A);
    CHECK(H->dim() == 2);
    CHECK(validate(*H).ok());
}

TEST_CASE("H0 of a product splits") {
    auto P = generate("koszul:x4:x2*k", FP);
    CHECK(validate(*P).ok());
    CHECK(P->h0().ring->dim == 3);
    auto ids = primitive_idempotents(*P->h0().ring);
    REQUIRE(ids.size() == 2);
    CHECK(P->blocks().size() == 2);
    CHECK(P->blocks()[0].alg->dim() == 8);
    CHECK(P->blocks()[1].alg->dim() == 1);
    CHECK(primitive_idempotents(*DGAlgebra::field_algebra(FP)->h0().ring).size() == 1);
}

TEST_CASE("k_dual") {
    auto k = DGAlgebra::field_algebra(FP);
    DGModule kd = k_dual(regular_module(k));
    CHECK(kd.lo() == 0);
    CHECK(kd.hi() == 0);
    CHECK(kd.dim(0) == 1);
    for (Field f : {FP, QQ}) {
        auto A = A1(f);
        DGModule M = regular_module(A);
        DGModule E = k_dual(M);
        CHECK(validate(E).ok());
        for (int n = -3; n <= 3; ++n) CHECK(hdim(E, n) == hdim(M, -n));
        DGModule EE = k_dual(E);
        for (int n = -3; n <= 3; ++n) {
            CHECK(EE.dim(n) == M.dim(n));
            CHECK(hdim(EE, n) == hdim(M, n));
        }
    }
}

TEST_CASE("cone of identity is acyclic and shifts are valid") {
    auto A = A1();
    auto M = std::make_shared<DGModule>(regular_module(A));
    DGModule C = cone(identity_map(M));
    CHECK(validate(C).ok());
    CHECK(is_acyclic(C));
    for (int s : {-2, -1, 1, 3}) {
        DGModule S = shift(*M, s);
        CHECK(validate(S).ok());
        for (int n = -4; n <= 4; ++n) CHECK(hdim(S, n) == hdim(*M, n + s));
    }
}

TEST_CASE("smart truncations") {
    auto A = A1();
    auto M = std::make_shared<DGModule>(regular_module(A));
    auto le0 = smart_truncate_le(M, 0);
    CHECK(le0.module->total_dim() == M->total_dim());
    auto low = smart_truncate_le(M, -5);
    CHECK(is_acyclic(*low.module));
    auto gt = smart_truncate_gt(M, -1);
    CHECK(validate(*gt.module).ok());
    CHECK(hdim(*gt.module, 0) == 2);
    CHECK(hdim(*gt.module, -1) == 0);
    auto samples = sample_modules(A, 5, 50);
    CHECK(samples.size() == 50);
    for (auto& N : samples) {
        REQUIRE(validate(*N).ok());
        for (int n = N->lo() - 1; n <= N->hi() + 1; ++n) {
            auto t = smart_truncate_le(N, n);
            auto q = smart_truncate_gt(N, n);
            CHECK(validate(*t.module).ok());
            CHECK(validate(*q.module).ok());
            CHECK(validate(t.map).ok());
            CHECK(validate(q.map).ok());
            for (int i = N->lo() - 1; i <= N->hi() + 1; ++i) {
                if (i <= n) {
                    CHECK(hdim(*t.module, i) == hdim(*N, i));
                    CHECK(hdim(*q.module, i) == 0);
                } else {
                    CHECK(hdim(*t.module, i) == 0);
                    CHECK(hdim(*q.module, i) == hdim(*N, i));
                }
            }
            CHECK(truncation_triangle_check(N, n).ok());
        }
    }
}

TEST_CASE("cone long exact sequence on random maps") {
    auto A = A1();
    Rng rng(9);
    auto samples = sample_modules(A, 17, 12);
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        ChainMap f = random_chain_map(samples[i], samples[i + 1], rng);
        REQUIRE(validate(f).ok());
        DGModule C = cone(f);
        CHECK(validate(C).ok());
        int lo = std::min(samples[i]->lo(), samples[i + 1]->lo()) - 2, hi = std::max(samples[i]->hi(), samples[i + 1]->hi()) + 2;
        long alt = 0;
        for (int n = lo; n <= hi; ++n) {
            long t = hdim(*samples[i], n) - hdim(*samples[i + 1], n) + hdim(C, n);
            alt += (n % 2 == 0) ? t : -t;
            // exactness at H^n(N): im H(f) = ker H(incl)
            Mat hf = induced_on_cohomology(f, n);
            auto Cp = std::make_shared<DGModule>(C);
            Mat hi_ = induced_on_cohomology(cone_inclusion(f, Cp), n);
            CHECK(rank(hf) + rank(hi_) == hdim(*samples[i + 1], n));
            CHECK((hi_ * hf).is_zero());
        }
        CHECK(alt == 0);
    }
}

TEST_CASE("rank-nullity and validation on sampled modules, both fields") {
    for (Field f : {FP, QQ}) {
        for (const char* spec : {"k", "koszul:x4:x2", "koszul:x4:x2*k", "trivext:1:1"}) {
            auto A = generate(spec, f);
            CHECK(validate(*A).ok());
            for (auto& M : sample_modules(A, 3, 10)) {
                CHECK(validate(*M).ok());
                for (int n = M->lo(); n <= M->hi(); ++n) CHECK(M->dim(n) == kernel_basis(M->diff(n)).cols() + rank(M->diff(n)));
            }
        }
    }
}

TEST_CASE("random algebras validate") {
    for (uint64_t s = 0; s < 20; ++s) {
        auto A = random_algebra(FP, s);
        CHECK(validate(*A).ok());
        CHECK(A->commutative());
        CHECK(A->dim() <= 24);
    }
    CHECK(validate(*generate("random:7", QQ)).ok());
}

TEST_CASE("H0 module as DG module and residue fields") {
    auto A = A1();
    DGModule H = h0_as_module(A);
    CHECK(validate(H).ok());
    CHECK(H.dim(0) == 2);
    DGModule k = residue_module(A, 0);
    CHECK(validate(k).ok());
    CHECK(k.total_dim() == 1);
    auto P = generate("koszul:x4:x2*k", FP);
    CHECK(residue_module(P, 1).total_dim() == 1);
    auto Pm = std::make_shared<DGModule>(regular_module(P));
    auto c = cut_module(Pm, P->blocks()[1].e);
    CHECK(c.module->total_dim() == 1);
    CHECK(validate(c.incl).ok());
    CHECK(validate(c.proj).ok());
}
