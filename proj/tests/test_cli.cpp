#include "doctest.h"

#include <fstream>
#include <sstream>

#include "dginj/cli.hpp"
#include "dginj/generators.hpp"
#include "dginj/presentation.hpp"
#include "dginj/suites.hpp"

using namespace dginj;

namespace {
const Field FP = Field::prime(32003);
const Field QQ = Field::rationals();

std::string data(const std::string& f) { return std::string(DGINJ_TEST_DATA) + "/" + f; }

// structure constants compared label by label, so the oracle does not depend on storage order
void same_algebra(const DGAlgebra& A, const DGAlgebra& B) {
    REQUIRE(A.dim() == B.dim());
    CHECK(A.field() == B.field());
    CHECK(A.commutative() == B.commutative());
    CHECK(A.label(A.unit()) == B.label(B.unit()));
    std::vector<int> to(A.dim());
    for (int i = 0; i < A.dim(); ++i) {
        to[i] = B.label_index(A.label(i));
        REQUIRE(to[i] >= 0);
        CHECK(A.degree(i) == B.degree(to[i]));
    }
    for (int a = 0; a < A.dim(); ++a)
        for (int b = 0; b < A.dim(); ++b) {
            Mat x = A.mul(A.basis_vec(a), A.basis_vec(b)), y = B.mul(B.basis_vec(to[a]), B.basis_vec(to[b]));
            for (int c = 0; c < A.dim(); ++c) CHECK(x.at(c, 0) == y.at(to[c], 0));
        }
    for (int a = 0; a < A.dim(); ++a)
        for (int c = 0; c < A.dim(); ++c) CHECK(A.diff().at(c, a) == B.diff().at(to[c], to[a]));
}

void same_module(const DGModule& M, const DGModule& N) {
    REQUIRE(M.lowest_nonzero() == N.lowest_nonzero());
    REQUIRE(M.highest_nonzero() == N.highest_nonzero());
    for (int n = M.lowest_nonzero(); n <= M.highest_nonzero(); ++n) {
        REQUIRE(M.dim(n) == N.dim(n));
        CHECK(M.diff(n) == N.diff(n));
        for (int a = 0; a < M.algebra()->dim(); ++a) CHECK(M.action(a, n) == N.action(a, n));
    }
}

ParseError parse_error(const std::string& text) {
    try {
        parse_presentation(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error for: " << text);
    return ParseError(0, 0, "");
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o, e;
    args.insert(args.begin(), "dginj");
    int rc = run_cli(args, o, e);
    if (out) *out = o.str() + e.str();
    return rc;
}
}  // namespace

TEST_CASE("the A1 file is the Koszul complex of x^2 over k[x]/(x^4)") {
    auto P = read_presentation(data("a1.dga"));
    CHECK(P.algebra->name() == "A1");
    same_algebra(*P.algebra, *generate("koszul:x4:x2", FP));
    REQUIRE(P.modules.size() == 2);
    CHECK(P.modules[0].name == "H0");
    CHECK(validate(*P.modules[0].module).ok());
    CHECK(hdims(*P.modules[0].module, -1, 1) == hdims(h0_as_module(P.algebra), -1, 1));
    CHECK(find_isomorphism(cohomology(*P.modules[0].module, 0), cohomology(h0_as_module(P.algebra), 0)).has_value());
    same_module(*P.modules[1].module, residue_module(P.algebra, 0));
}

TEST_CASE("print and parse round-trip") {
    for (Field f : {FP, QQ})
        for (const char* g : {"k", "koszul:x4:x2", "koszul:x4:x2*k", "trivext:1:1", "trivext:2:2", "random:1",
                              "random:2", "random:7", "koszul:x4:x2*trivext:1:1"}) {
            CAPTURE(std::string(g));
            auto A = generate(g, f);
            Presentation P{A, {}};
            int i = 0;
            for (auto& M : sample_modules(A, 3, 3, 10)) P.modules.push_back(named("M" + std::to_string(i++), M));
            std::string text = print_presentation(P);
            auto Q = parse_presentation(text);
            same_algebra(*A, *Q.algebra);
            REQUIRE(Q.modules.size() == P.modules.size());
            for (size_t m = 0; m < P.modules.size(); ++m) {
                CHECK(Q.modules[m].name == P.modules[m].name);
                same_module(*P.modules[m].module, *Q.modules[m].module);
            }
            // normalized form is a fixed point
            CHECK(print_presentation(Q) == text);
        }
    auto P = read_presentation(data("a1.dga"));
    CHECK(print_presentation(parse_presentation(print_presentation(P))) == print_presentation(P));
}

TEST_CASE("coefficients and commutativity closure") {
    auto P = parse_presentation(
        "field Q\nalgebra B\ncommutative\nbasis 1:0 e:-1 f:-1 ef:-2\nunit 1\n"
        "mult e*f = 1/2 ef\n");
    auto& B = *P.algebra;
    // f e = (-1)^{1} e f
    Mat fe = B.mul(B.basis_vec(B.label_index("f")), B.basis_vec(B.label_index("e")));
    CHECK(fe.at(B.label_index("ef"), 0) == Scalar(QQ, mpq_class(-1, 2)));
    auto P2 = parse_presentation("field F7\nalgebra C\nbasis 1:0 x:0\nunit 1\nmult x*x = -3 x + 0 x + 2 x\n");
    Mat xx = P2.algebra->mul(P2.algebra->basis_vec(1), P2.algebra->basis_vec(1));
    CHECK(xx.at(1, 0) == Scalar(Field::prime(7), -1));
    // a zero right-hand side is allowed
    CHECK_NOTHROW(parse_presentation("field F7\nalgebra C\nbasis 1:0 x:0\nunit 1\nmult x*x = 0\n"));
}

TEST_CASE("positioned parse errors") {
    const std::string head = "field F32003\nalgebra A\nbasis 1:0 x:0 e:-1\nunit 1\n";
    auto e = parse_error("field F32003\nalgebra A\n");
    CHECK(std::string(e.what()).find("no unit") != std::string::npos);
    e = parse_error(head + "mult x*y = x\n");
    CHECK(e.line == 5);
    CHECK(e.col == 8);
    CHECK(std::string(e.what()).find("unknown label 'y'") != std::string::npos);
    e = parse_error(head + "diff e = 2 z\n");
    CHECK(e.line == 5);
    CHECK(e.col == 12);
    e = parse_error("field F32003\nalgebra A\nbasis 1:0 x:$\n");
    CHECK(e.line == 3);
    CHECK(e.col == 13);
    e = parse_error("field F32003\nalgebra A\nbasis 1:0 y:3\n");
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("degree") != std::string::npos);
    // x*e lands in degree -1, x does not
    e = parse_error(head + "mult x*e = x\n");
    CHECK(e.line == 5);
    CHECK(e.col == 12);
    CHECK(std::string(e.what()).find("degree mismatch") != std::string::npos);
    e = parse_error(head + "mult x*x = x\nmult x*x = 0\n");
    CHECK(e.line == 6);
    e = parse_error("algebra A\n");
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("field") != std::string::npos);
    e = parse_error(head + "mult x*x = 2/0 x\n");
    CHECK(e.line == 5);
    e = parse_error(head + "frobnicate\n");
    CHECK(e.line == 5);
    CHECK(e.col == 1);
    // a structurally invalid algebra is rejected at its header, naming the identity
    e = parse_error(head + "diff e = x\nmult x*e = e\n");
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("leibniz") != std::string::npos);
    // modules: wrong degree, unknown algebra label, invalid action
    e = parse_error(head + "module M\nbasis m:0 n:0\nact x*m = n\nact x*n = m\n");
    CHECK(e.line == 5);
    CHECK(std::string(e.what()).find("associativity") != std::string::npos);
    e = parse_error(head + "module M\nbasis m:0\nact q*m = m\n");
    CHECK(e.line == 7);
    CHECK(e.col == 5);
    e = parse_error(head + "module M\nbasis m:0 n:1\nact x*m = n\n");
    CHECK(e.line == 7);
    CHECK(e.col == 11);
    e = parse_error(head + "module M\nbasis m:0 m:1\n");
    CHECK(e.line == 6);
    CHECK(e.col == 11);
}

TEST_CASE("generated instances and their caps") {
    auto A = generate("random:7", FP);
    CHECK(validate(*A).ok());
    CHECK(generate("koszul:x4:x2*k", FP)->dim() == 9);
    CHECK_THROWS_AS(make_instance("koszul:x4:x2", FP, 4), Error);
    auto I = make_instance("koszul:x4:x2", QQ, 64);
    CHECK(I.algebra->field() == QQ);
    CHECK(I.id == "koszul:x4:x2");
}

TEST_CASE("suites run and are deterministic") {
    SuiteOptions o;
    o.samples = 2;
    auto I = make_instance("koszul:x4:x2", FP);
    for (const char* s : {"validate", "inj-membership", "thm-eqv", "local-duality", "endo"}) {
        CAPTURE(std::string(s));
        auto r = run_suite(s, I, o);
        CAPTURE(r.to_json().dump());
        CHECK(r.ok());
        CHECK(r.count(Status::Pass) > 0);
    }
    auto d1 = suite_document("validate", {I}, o).dump(2);
    auto d2 = suite_document("validate", {make_instance("koszul:x4:x2", FP)}, o).dump(2);
    CHECK(d1 == d2);
    auto doc = suite_document("validate", {I}, o);
    CHECK(doc["schema"] == "dginj-report/1");
    CHECK(doc["status"] == "pass");
    CHECK(doc.dump().find("time") == std::string::npos);
    CHECK_THROWS_AS(run_suite("no-such-suite", I, o), Error);
}

TEST_CASE("exit code contract") {
    json doc = {{"status", "pass"}};
    CHECK(exit_code(doc) == 0);
    doc["status"] = "fail";
    CHECK(exit_code(doc) == 1);
    // undecided checks do not fail a suite
    Report r("x");
    r.undecided("y");
    CHECK(r.ok());
}

TEST_CASE("command line") {
    std::string out;
    CHECK(cli({"suite", "thm-eqv", "--gen", "koszul:x4:x2", "--samples", "2"}, &out) == 0);
    CHECK(json::parse(out)["status"] == "pass");
    CHECK(cli({"suite", "local-duality", "--gen", "koszul:x4:x2", "--samples", "2"}) == 0);
    CHECK(cli({"suite", "all", "--gen", "trivial:k", "--samples", "2"}) == 0);
    CHECK(cli({"--suite", "validate", "--gen", "k", "--field", "Q"}, &out) == 0);
    CHECK(json::parse(out)["instances"][0]["field"] == "Q");
    std::string a, b;
    cli({"suite", "validate", "--gen", "koszul:x4:x2*k", "--seed", "5"}, &a);
    cli({"suite", "validate", "--gen", "koszul:x4:x2*k", "--seed", "5"}, &b);
    CHECK(a == b);
    // input errors are reported with their position and exit 2
    CHECK(cli({"parse", data("a1.dga")}, &out) == 0);
    CHECK(out == print_presentation(read_presentation(data("a1.dga"))));
    std::string bad = std::string(DGINJ_TEST_TMP) + "/bad.dga";
    std::ofstream(bad) << "field F32003\nalgebra A\nbasis 1:0\nunit 1\nmult 1*z = 1\n";
    CHECK(cli({"parse", bad}, &out) == 2);
    CHECK(out.find("bad.dga:5:8:") != std::string::npos);
    CHECK(cli({"suite", "validate", "--file", data("a1.dga")}) == 0);
    CHECK(cli({"suite", "validate", "--gen", "koszul:x4:x2", "--max-dim", "4"}) == 2);
    CHECK(cli({"generate", "koszul:x4:x2"}, &out) == 0);
    same_algebra(*parse_presentation(out).algebra, *generate("koszul:x4:x2", FP));
    std::string rep = std::string(DGINJ_TEST_TMP) + "/rep.json";
    CHECK(cli({"suite", "endo", "--gen", "k", "--out", rep}) == 0);
    std::ifstream in(rep);
    CHECK(json::parse(in)["suite"] == "endo");
}
