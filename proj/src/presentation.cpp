#include "dginj/presentation.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dginj {

ParseError::ParseError(int l, int c, const std::string& msg)
    : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

constexpr int kMaxModuleDegree = 64;

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '^' || c == '@' || c == '\'' || c == '.' ||
           c == '/';
}

bool is_number(const std::string& w) {
    size_t slash = w.find('/');
    auto digits = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (slash == std::string::npos) return digits(w);
    return digits(w.substr(0, slash)) && digits(w.substr(slash + 1));
}

struct Tok {
    std::string s;  // a word, or one of * = + - :
    int col;
    bool word() const { return word_char(s[0]); }
};

struct Line {
    int no;
    std::string raw;  // without the comment
    std::vector<Tok> toks;
};

Line lex(int no, const std::string& text) {
    Line L{no, text.substr(0, text.find('#')), {}};
    const std::string& s = L.raw;
    for (size_t i = 0; i < s.size();) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (word_char(c)) {
            size_t j = i;
            while (j < s.size() && word_char(s[j])) ++j;
            L.toks.push_back({s.substr(i, j - i), static_cast<int>(i) + 1});
            i = j;
        } else if (c == '*' || c == '=' || c == '+' || c == '-' || c == ':') {
            L.toks.push_back({std::string(1, c), static_cast<int>(i) + 1});
            ++i;
        } else {
            throw ParseError(no, static_cast<int>(i) + 1, std::string("unexpected character '") + c + "'");
        }
    }
    return L;
}

// the rest of the line after the keyword, as a name
std::string rest_of(const Line& L, const Tok& kw) {
    std::string r = L.raw.substr(kw.col - 1 + kw.s.size());
    size_t b = r.find_first_not_of(" \t\r"), e = r.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : r.substr(b, e - b + 1);
}

struct Labels {
    std::vector<std::string> names;
    std::vector<int> degs;
    std::map<std::string, int> index;

    void add(const Line& L, const Tok& t, int deg) {
        if (is_number(t.s) && t.s.find('/') != std::string::npos) throw ParseError(L.no, t.col, "label '" + t.s + "' looks like a coefficient");
        if (t.s.find('/') != std::string::npos) throw ParseError(L.no, t.col, "'/' is not allowed in labels");
        if (!index.emplace(t.s, static_cast<int>(names.size())).second)
            throw ParseError(L.no, t.col, "duplicate label '" + t.s + "'");
        names.push_back(t.s);
        degs.push_back(deg);
    }
    int find(const Line& L, const Tok& t, const char* what) const {
        auto it = index.find(t.s);
        if (it == index.end()) throw ParseError(L.no, t.col, "unknown label '" + t.s + "' (" + what + ")");
        return it->second;
    }
};

class Cursor {
public:
    Cursor(const Line& L, size_t pos) : L_(L), i_(pos) {}
    bool done() const { return i_ >= L_.toks.size(); }
    const Tok& peek() const { return L_.toks[i_]; }
    [[noreturn]] void fail(const std::string& msg) const {
        int col = done() ? static_cast<int>(L_.raw.size()) + 1 : peek().col;
        throw ParseError(L_.no, col, msg);
    }
    const Tok& word(const char* what) {
        if (done() || !peek().word()) fail(std::string("expected ") + what);
        return L_.toks[i_++];
    }
    void expect(const char* sym) {
        if (done() || peek().s != sym) fail(std::string("expected '") + sym + "'");
        ++i_;
    }
    bool accept(const char* sym) {
        if (!done() && peek().s == sym) return ++i_, true;
        return false;
    }
    void end() const {
        if (!done()) fail("unexpected '" + peek().s + "'");
    }
    const Line& line() const { return L_; }

private:
    const Line& L_;
    size_t i_;
};

Scalar coefficient(const Field& f, const Cursor& c, const Tok& t) {
    size_t slash = t.s.find('/');
    mpz_class num(t.s.substr(0, slash)), den(slash == std::string::npos ? "1" : t.s.substr(slash + 1));
    if (den == 0) throw ParseError(c.line().no, t.col, "zero denominator");
    if (!f.is_q() && mpz_class(den % f.p) == 0)
        throw ParseError(c.line().no, t.col, "denominator vanishes in " + f.name());
    if (f.is_q()) return Scalar(f, mpq_class(num, den));
    long n = mpz_class(num % f.p).get_si(), d = mpz_class(den % f.p).get_si();
    return Scalar(f, n) / Scalar(f, d);
}

// sum of [coef] label terms; every label must sit in degree deg
std::vector<DGAlgebra::Term> terms(Cursor& c, const Field& f, const Labels& lab, int deg, const char* what) {
    std::vector<DGAlgebra::Term> out;
    bool first = true;
    while (!c.done()) {
        bool neg = false;
        if (c.accept("-"))
            neg = true;
        else if (!first)
            c.expect("+");
        first = false;
        const Tok& w = c.word("a coefficient or label");
        Scalar s(f, 1);
        const Tok* label = &w;
        bool known = lab.index.count(w.s) > 0;
        if (!known && is_number(w.s)) {
            s = coefficient(f, c, w);
            if (c.done() || !c.peek().word()) {
                if (!s.is_zero()) c.fail("expected a label after the coefficient");
                continue;
            }
            label = &c.word("a label");
        } else if (known && !c.done() && c.peek().word() && is_number(w.s)) {
            // "2 x" where 2 happens to be a label as well: coefficient wins
            s = coefficient(f, c, w);
            label = &c.word("a label");
        }
        int idx = lab.find(c.line(), *label, what);
        if (lab.degs[idx] != deg)
            throw ParseError(c.line().no, label->col,
                             "degree mismatch: '" + label->s + "' has degree " + std::to_string(lab.degs[idx]) +
                                 ", expected " + std::to_string(deg));
        out.push_back({idx, neg ? -s : s});
    }
    if (first) c.fail("expected a right-hand side");
    return out;
}

void basis_decls(Cursor& c, Labels& lab, int lo, int hi) {
    while (!c.done()) {
        const Tok& l = c.word("a label");
        c.expect(":");
        bool neg = c.accept("-");
        const Tok& d = c.word("a degree");
        if (!is_number(d.s) || d.s.find('/') != std::string::npos || d.s.size() > 6)
            throw ParseError(c.line().no, d.col, "bad degree '" + d.s + "'");
        int deg = std::stoi(d.s) * (neg ? -1 : 1);
        if (deg < lo || deg > hi)
            throw ParseError(c.line().no, d.col,
                             "degree " + std::to_string(deg) + " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
        lab.add(c.line(), l, deg);
    }
}

std::string failing_checks(const Report& r) {
    std::string s;
    for (auto& ch : r.checks)
        if (ch.status == Status::Fail) s += (s.empty() ? "" : ", ") + ch.name + (ch.witness.contains("at") ? " at " + ch.witness["at"].dump() : "");
    return s;
}

struct ModuleDraft {
    int line = 0;
    std::string name;
    Labels lab;
    std::vector<std::tuple<int, int, std::vector<DGAlgebra::Term>>> acts;  // (alg basis, module basis, terms)
    std::vector<std::pair<int, std::vector<DGAlgebra::Term>>> diffs;
    std::set<std::pair<int, int>> seen_act;
    std::set<int> seen_diff;
};

NamedModule build_module(const AlgPtr& A, ModuleDraft& m) {
    const Field f = A->field();
    const int n = static_cast<int>(m.lab.names.size());
    // storage order: degree ascending, then file order
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return m.lab.degs[a] < m.lab.degs[b]; });
    NamedModule out{m.name, nullptr, {}};
    if (n == 0) {
        out.module = std::make_shared<DGModule>(DGModule::zero(A));
        return out;
    }
    int lo = m.lab.degs[order.front()], hi = m.lab.degs[order.back()];
    std::vector<int> dims(hi - lo + 1, 0), pos(n);
    for (int i : order) {
        pos[i] = dims[m.lab.degs[i] - lo]++;
        out.labels.push_back(m.lab.names[i]);
    }
    DGModule M(A, lo, dims);
    std::map<std::pair<int, int>, Mat> act;
    auto act_at = [&](int a, int deg) -> Mat& {
        auto it = act.find({a, deg});
        if (it == act.end()) it = act.emplace(std::make_pair(a, deg), Mat(f, M.dim(deg + A->degree(a)), M.dim(deg))).first;
        return it->second;
    };
    for (auto& [a, v, ts] : m.acts) {
        int deg = m.lab.degs[v];
        Mat& X = act_at(a, deg);
        for (auto& t : ts) X.add_to(pos[t.idx], pos[v], t.c);
    }
    for (int deg = lo; deg <= hi; ++deg) act_at(A->unit(), deg) = Mat::identity(f, M.dim(deg));
    for (auto& [key, X] : act) M.set_action(key.first, key.second, X);
    std::map<int, Mat> d;
    for (auto& [v, ts] : m.diffs) {
        int deg = m.lab.degs[v];
        auto it = d.find(deg);
        if (it == d.end()) it = d.emplace(deg, Mat(f, M.dim(deg + 1), M.dim(deg))).first;
        for (auto& t : ts) it->second.add_to(pos[t.idx], pos[v], t.c);
    }
    for (auto& [deg, X] : d) M.set_diff(deg, X);
    auto r = validate(M);
    if (!r.ok()) throw ParseError(m.line, 1, "invalid module '" + m.name + "': " + failing_checks(r));
    out.module = std::make_shared<DGModule>(std::move(M));
    return out;
}

std::string term_str(const std::vector<std::pair<Scalar, std::string>>& ts) {
    if (ts.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < ts.size(); ++i) {
        const auto& [c, l] = ts[i];
        std::string v = c.str();
        bool neg = v[0] == '-';
        if (neg) v = v.substr(1);
        if (i == 0)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (v != "1") s += v + " ";
        s += l;
    }
    return s;
}

void check_label(const std::string& l) {
    if (l.empty() || !std::all_of(l.begin(), l.end(), word_char) || l.find('/') != std::string::npos)
        throw Error("label '" + l + "' cannot be printed");
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    std::optional<Field> field;
    int field_line = 0, alg_line = 0;
    DGAlgebra::Input alg;
    Labels alab;
    bool have_unit = false;
    std::set<std::pair<int, int>> seen_mult;
    std::set<int> seen_diff;
    AlgPtr A;
    std::vector<ModuleDraft> drafts;
    Presentation P;

    auto finish_algebra = [&](int at) {
        if (A) return;
        if (!alg_line) throw ParseError(at, 1, "expected 'algebra'");
        if (alab.names.empty() || !have_unit) throw ParseError(alg_line, 1, "no unit");
        alg.labels = alab.names;
        alg.degrees = alab.degs;
        try {
            A = DGAlgebra::make(alg);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(alg_line, 1, e.what());
        }
        auto r = validate(*A);
        if (!r.ok()) throw ParseError(alg_line, 1, "invalid algebra '" + alg.name + "': " + failing_checks(r));
        P.algebra = A;
    };

    while (std::getline(in, raw)) {
        ++no;
        Line L = lex(no, raw);
        if (L.toks.empty()) continue;
        const Tok& kw = L.toks[0];
        Cursor c(L, 1);
        if (!field) {
            if (kw.s != "field") throw ParseError(no, kw.col, "expected 'field' header");
            const Tok& w = c.word("a field (F<p> or Q)");
            c.end();
            try {
                field = Field::parse(w.s);
            } catch (const Error& e) {
                throw ParseError(no, w.col, e.what());
            }
            field_line = no;
            alg.field = *field;
            continue;
        }
        const Field f = *field;
        if (kw.s == "field") throw ParseError(no, kw.col, "duplicate 'field' header");
        if (kw.s == "module") {
            finish_algebra(no);
            ModuleDraft m;
            m.line = no;
            m.name = rest_of(L, kw);
            if (m.name.empty()) throw ParseError(no, kw.col + 7, "expected a module name");
            drafts.push_back(std::move(m));
            continue;
        }
        if (!drafts.empty()) {
            ModuleDraft& m = drafts.back();
            if (kw.s == "basis") {
                basis_decls(c, m.lab, -kMaxModuleDegree, kMaxModuleDegree);
            } else if (kw.s == "act") {
                const Tok& a = c.word("an algebra label");
                int ai = A->label_index(a.s);
                if (ai < 0) throw ParseError(no, a.col, "unknown algebra label '" + a.s + "'");
                if (ai == A->unit()) throw ParseError(no, a.col, "the unit acts as the identity implicitly");
                c.expect("*");
                const Tok& v = c.word("a module label");
                int vi = m.lab.find(L, v, "module");
                c.expect("=");
                auto ts = terms(c, f, m.lab, A->degree(ai) + m.lab.degs[vi], "module");
                if (!m.seen_act.insert({ai, vi}).second) throw ParseError(no, kw.col, "duplicate action " + a.s + "*" + v.s);
                m.acts.emplace_back(ai, vi, std::move(ts));
            } else if (kw.s == "diff") {
                const Tok& v = c.word("a module label");
                int vi = m.lab.find(L, v, "module");
                c.expect("=");
                auto ts = terms(c, f, m.lab, m.lab.degs[vi] + 1, "module");
                if (!m.seen_diff.insert(vi).second) throw ParseError(no, kw.col, "duplicate differential of " + v.s);
                m.diffs.emplace_back(vi, std::move(ts));
            } else {
                throw ParseError(no, kw.col, "unknown statement '" + kw.s + "' in a module block");
            }
            continue;
        }
        if (kw.s == "algebra") {
            if (alg_line) throw ParseError(no, kw.col, "only one algebra per file");
            alg_line = no;
            alg.name = rest_of(L, kw);
            if (alg.name.empty()) alg.name = "A";
        } else if (!alg_line) {
            throw ParseError(no, kw.col, "expected 'algebra'");
        } else if (kw.s == "commutative") {
            c.end();
            alg.commutative = true;
        } else if (kw.s == "basis") {
            basis_decls(c, alab, kMinDegree, 0);
            if (static_cast<int>(alab.names.size()) > kMaxTotalDim) throw ParseError(no, kw.col, "algebra dimension exceeds cap");
        } else if (kw.s == "unit") {
            const Tok& u = c.word("a label");
            c.end();
            if (have_unit) throw ParseError(no, kw.col, "duplicate 'unit'");
            alg.unit = alab.find(L, u, "algebra");
            if (alab.degs[alg.unit] != 0) throw ParseError(no, u.col, "the unit must have degree 0");
            have_unit = true;
        } else if (kw.s == "mult") {
            const Tok& a = c.word("a label");
            int ai = alab.find(L, a, "algebra");
            c.expect("*");
            const Tok& b = c.word("a label");
            int bi = alab.find(L, b, "algebra");
            c.expect("=");
            auto ts = terms(c, f, alab, alab.degs[ai] + alab.degs[bi], "algebra");
            if (!seen_mult.insert({ai, bi}).second) throw ParseError(no, kw.col, "duplicate product " + a.s + "*" + b.s);
            alg.mult.push_back({{ai, bi}, std::move(ts)});
        } else if (kw.s == "diff") {
            const Tok& a = c.word("a label");
            int ai = alab.find(L, a, "algebra");
            c.expect("=");
            auto ts = terms(c, f, alab, alab.degs[ai] + 1, "algebra");
            if (!seen_diff.insert(ai).second) throw ParseError(no, kw.col, "duplicate differential of " + a.s);
            alg.diff.push_back({ai, std::move(ts)});
        } else {
            throw ParseError(no, kw.col, "unknown statement '" + kw.s + "'");
        }
    }
    if (!field) throw ParseError(no + 1, 1, "expected 'field' header");
    (void)field_line;
    finish_algebra(no + 1);
    for (auto& m : drafts) P.modules.push_back(build_module(A, m));
    return P;
}

Presentation read_presentation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

NamedModule named(const std::string& name, const ModPtr& M) {
    NamedModule out{name, M, {}};
    int k = 0;
    for (int n = M->lo(); n <= M->hi(); ++n)
        for (int i = 0; i < M->dim(n); ++i) out.labels.push_back("v" + std::to_string(k++));
    return out;
}

std::string print_algebra(const AlgPtr& A) { return print_presentation({A, {}}); }

std::string print_presentation(const Presentation& P) {
    const DGAlgebra& A = *P.algebra;
    const Field f = A.field();
    std::ostringstream o;
    for (int i = 0; i < A.dim(); ++i) check_label(A.label(i));
    o << "field " << f.name() << "\n";
    o << "algebra " << A.name() << "\n";
    if (A.commutative()) o << "commutative\n";
    for (int n = 0; n >= A.lowest_degree(); --n) {
        auto [b, e] = A.range(n);
        if (b == e) continue;
        o << "basis";
        for (int i = b; i < e; ++i) o << " " << A.label(i) << ":" << n;
        o << "\n";
    }
    o << "unit " << A.label(A.unit()) << "\n";
    auto alg_terms = [&](const std::vector<DGAlgebra::Term>& ts) {
        std::vector<std::pair<Scalar, std::string>> v;
        for (auto& t : ts) v.push_back({t.c, A.label(t.idx)});
        return term_str(v);
    };
    for (int a = 0; a < A.dim(); ++a)
        for (int b = 0; b < A.dim(); ++b)
            if (a != A.unit() && b != A.unit() && !A.mult(a, b).empty())
                o << "mult " << A.label(a) << "*" << A.label(b) << " = " << alg_terms(A.mult(a, b)) << "\n";
    for (int a = 0; a < A.dim(); ++a) {
        std::vector<DGAlgebra::Term> ts;
        for (int c = 0; c < A.dim(); ++c)
            if (!A.diff().entry_zero(c, a)) ts.push_back({c, A.diff().at(c, a)});
        if (!ts.empty()) o << "diff " << A.label(a) << " = " << alg_terms(ts) << "\n";
    }
    for (const auto& nm : P.modules) {
        const DGModule& M = *nm.module;
        if (static_cast<int>(nm.labels.size()) != M.total_dim()) throw Error("module '" + nm.name + "': label count mismatch");
        for (auto& l : nm.labels) check_label(l);
        // flat index of (degree, i)
        std::map<int, int> off;
        int k = 0;
        for (int n = M.lo(); n <= M.hi(); ++n) off[n] = k, k += M.dim(n);
        auto lab = [&](int n, int i) { return nm.labels[off[n] + i]; };
        auto col_terms = [&](const Mat& X, int j, int n) {
            std::vector<std::pair<Scalar, std::string>> v;
            for (int r = 0; r < X.rows(); ++r)
                if (!X.entry_zero(r, j)) v.push_back({X.at(r, j), lab(n, r)});
            return term_str(v);
        };
        o << "\nmodule " << nm.name << "\n";
        for (int n = M.lo(); n <= M.hi(); ++n) {
            if (!M.dim(n)) continue;
            o << "basis";
            for (int i = 0; i < M.dim(n); ++i) o << " " << lab(n, i) << ":" << n;
            o << "\n";
        }
        for (int a = 0; a < A.dim(); ++a) {
            if (a == A.unit()) continue;
            for (int n = M.lo(); n <= M.hi(); ++n) {
                if (!M.dim(n) || !M.dim(n + A.degree(a))) continue;
                Mat X = M.action(a, n);
                for (int j = 0; j < X.cols(); ++j)
                    if (!X.col(j).is_zero()) o << "act " << A.label(a) << "*" << lab(n, j) << " = " << col_terms(X, j, n + A.degree(a)) << "\n";
            }
        }
        for (int n = M.lo(); n <= M.hi(); ++n) {
            if (!M.dim(n) || !M.dim(n + 1)) continue;
            Mat X = M.diff(n);
            for (int j = 0; j < X.cols(); ++j)
                if (!X.col(j).is_zero()) o << "diff " << lab(n, j) << " = " << col_terms(X, j, n + 1) << "\n";
        }
    }
    return o.str();
}

}  // namespace dginj
