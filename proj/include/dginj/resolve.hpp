#pragma once
// semi-free resolutions over A, Hom and tensor complexes out of them, and
// minimal free resolutions / Matlis duals over the Artinian ring H^0(A)
#include <climits>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "dginj/module.hpp"

namespace dginj {

constexpr int kMaxGenerators = 4096;

// free generator g of degree deg spanning e_block A g
struct FreeGen {
    int deg = 0;
    int block = 0;
    Mat dg;     // d(g) in P^{deg+1}
    Mat image;  // pi(g) in target^{deg}
};

// degreewise layout of a free module on tagged generators
class FreeLayout {
public:
    FreeLayout() = default;
    explicit FreeLayout(AlgPtr A);
    const AlgPtr& algebra() const { return A_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<FreeGen>& gens() const { return gens_; }
    std::vector<FreeGen>& gens() { return gens_; }
    const DGAlgebra& block_alg(int t) const { return *blocks_[t].alg; }

    int dim(int n) const;
    // first index of the span of generator j inside P^n
    int offset(int j, int n) const;
    // dimension of generator j's span in degree n
    int span(int j, int n) const;
    // index in P^{deg} of the generator itself
    int gen_index(int j) const;
    // block t's basis element c, as an element of A, acting on block t2's basis
    const Mat& elem_action(int t, int c, int t2) const;
    // left multiplication by A-basis element a on block t's basis
    const Mat& basis_action(int t, int a) const { return Lb_[t][a]; }
    int lo() const;
    int hi() const;

    DGModule build() const;
    // the map P -> target given by the recorded images
    ChainMap projection(const ModPtr& P, const ModPtr& target) const;

private:
    AlgPtr A_;
    std::vector<Block> blocks_;
    std::vector<FreeGen> gens_;
    std::vector<std::vector<Mat>> Lb_;  // [t][a]
    mutable std::map<std::tuple<int, int, int>, Mat> cache_;
};

struct SemiFreeResolution {
    ModPtr target;
    FreeLayout layout;
    ModPtr P;
    ChainMap pi;
    int floor = 0;
    bool complete = false;  // cone(pi) acyclic in every degree
    // generator count per degree (descending)
    std::map<int, int, std::greater<int>> generator_counts() const;
    int generators() const { return static_cast<int>(layout.gens().size()); }
};

// adjoin generators top-down from sup(M) to floor, killing H of the cone; minimal
// chooses generators of H(cone) modulo the radical of H^0, one local block at a time
SemiFreeResolution semifree_resolve(const ModPtr& M, int floor, bool minimal = true);
// H^i(cone(pi)) = 0 for all i >= floor
Report certify(const SemiFreeResolution& R);

// Hom_A(P, N): degree i = sum_j (e_{t_j} N)^{e_j + i}
struct HomComplex {
    FreeLayout layout;
    ModPtr P;
    ModPtr N;
    ModPtr C;                 // over A if commutative, else over k
    int certified_hi = INT_MAX;  // H^i exact for i <= certified_hi
    std::vector<Cut> cuts;    // e_t N per block
    int offset(int j, int i) const;
    bool certified(int i) const { return i <= certified_hi; }
};
HomComplex hom_complex(const SemiFreeResolution& R, const ModPtr& N);
// a degree-0 cycle of Hom(P,N) as a strict chain map P -> N, and back
ChainMap hom_cycle_to_map(const HomComplex& H, const Mat& phi);
Mat map_to_hom_element(const HomComplex& H, const ChainMap& f);

// P tensor_A N for commutative A
struct TensorComplex {
    FreeLayout layout;
    ModPtr P;
    ModPtr N;
    ModPtr C;
    int certified_lo = INT_MIN;  // H^n exact for n >= certified_lo
    std::vector<Cut> cuts;
    int offset(int j, int n) const;
    bool certified(int n) const { return n >= certified_lo; }
};
TensorComplex tensor_complex(const SemiFreeResolution& R, const ModPtr& N);

// ---- over H^0(A) ----
struct MinimalFreeResolution {
    H0Module module;
    std::vector<Mat> idempotents;        // primitive idempotents of the ring
    std::vector<std::vector<int>> gens;  // block of each generator of F_i
    std::vector<Mat> maps;               // maps[0]: F_0 -> M, maps[i]: F_i -> F_{i-1}
    bool finite = false;                 // kernel reached zero within the length
    std::vector<int> betti() const;
    int proj_dim() const { return finite ? static_cast<int>(gens.size()) - 1 : -1; }
};
MinimalFreeResolution minimal_free_resolution(const H0Module& M, int length);
Report validate(const MinimalFreeResolution& F);
H0Module matlis_dual(const H0Module& M);
bool is_projective(const H0Module& M);
bool is_injective(const H0Module& M);

}  // namespace dginj
