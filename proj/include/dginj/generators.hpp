#pragma once
// built-in instance families and seeded samplers
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dginj/module.hpp"

namespace dginj {

// k[x_1..x_r]/(x_i^{n_i}) tensor exterior(e_1..e_s), d(e_j) = f_j, |e_j| = -1
struct KoszulSpec {
    std::vector<int> exps;                                  // n_i per variable
    std::vector<std::vector<std::pair<std::vector<int>, long>>> elems;  // f_j as (monomial exponents, coeff)
};
AlgPtr koszul(Field f, const KoszulSpec& s, const std::string& name = "");
// k[x]/(x^n) with one Koszul element x^m
AlgPtr koszul_x(Field f, int n, int m);
// k plus k^dim placed in degree -deg, all products of the ideal zero
AlgPtr trivial_extension(Field f, int dim, int deg);
AlgPtr random_algebra(Field f, uint64_t seed);
// "k", "trivial:k", "koszul:x4:x2", "trivext:1:1", "random:7", joined by '*' for products
AlgPtr generate(const std::string& spec, Field f);

// deterministic integer stream shared by all samplers
class Rng {
public:
    explicit Rng(uint64_t seed) : g_(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
    Scalar scalar(Field f, int span = 5) { return Scalar(f, uniform(-span, span)); }
    Scalar nonzero(Field f, int span = 5);
    Mat mat(Field f, int r, int c, int density = 60);
    bool coin(int pct) { return uniform(0, 99) < pct; }

private:
    std::mt19937_64 g_;
};

// strict map A[s] -> N sending the generator to a cycle z of N^{-s}
ChainMap free_map(const ModPtr& N, const Mat& z, int s);
// random element of the space of strict chain maps M -> N
ChainMap random_chain_map(const ModPtr& M, const ModPtr& N, Rng& rng);
// basis of the space of strict chain maps M -> N
std::vector<ChainMap> chain_map_space(const ModPtr& M, const ModPtr& N);
// bounded modules of total dimension <= maxdim built from free modules, duals, H^0 and cones
std::vector<ModPtr> sample_modules(const AlgPtr& A, uint64_t seed, int count, int maxdim = 24);

}  // namespace dginj
