#pragma once
// the ".dga" text format: one algebra, then any number of modules over it
//
//   field F32003            (or Q)
//   algebra A1
//   commutative             (optional: b*a is filled in from a*b)
//   basis 1:0 x:0 e:-1      (label:degree, may span several lines)
//   unit 1
//   mult x*x = x2           (omitted products are zero, unit products implicit)
//   diff e = x2 - 3 x3
//   module M
//   basis m:0 n:-1
//   act x*m = 2 m
//   diff n = m
//
// '#' starts a comment. Coefficients are integers or p/q, written before the label.
#include <string>
#include <vector>

#include "dginj/module.hpp"

namespace dginj {

struct ParseError : Error {
    int line, col;
    ParseError(int l, int c, const std::string& msg);
};

struct NamedModule {
    std::string name;
    ModPtr module;
    std::vector<std::string> labels;  // in basis order: degree ascending, then index
};

struct Presentation {
    AlgPtr algebra;
    std::vector<NamedModule> modules;
};

Presentation parse_presentation(const std::string& text);
Presentation read_presentation(const std::string& path);
// normalized form: basis in storage order, one line per nonzero product / differential / action
std::string print_presentation(const Presentation& P);
std::string print_algebra(const AlgPtr& A);
// labels v0, v1, ... when none are known
NamedModule named(const std::string& name, const ModPtr& M);

}  // namespace dginj
