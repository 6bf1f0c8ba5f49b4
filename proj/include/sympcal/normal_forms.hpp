#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "sympcal/matrices.hpp"
#include "sympcal/rng.hpp"

namespace sympcal {

// A 2n x 2n real matrix certified symplectic to a tolerance measured at
// construction time.
struct SymplecticMatrix {
    int n = 0;
    Mat m;
    double certified_tol = 0.0;
};

SymplecticMatrix certify_symplectic(const Mat& m, double tol = 1e-10);

// --- normal form families -------------------------------------------------
//
// Parameter blocks for the constructors below. Realized matrices act on
// R^{2m} (or R^{4m}, R^{4m+2}) with the (q..., p...) coordinate splitting.

struct N1Block {            // [[lambda, b], [0, lambda]], lambda = +-1
    double lambda = 1.0;
    double b = 0.0;
};
struct NmBlock {            // [[A_m, B_m(b)], [0, C_m]], lambda = +-1, m >= 2
    double lambda = 1.0;
    std::vector<double> b;  // size m
};
struct RotationBlock {      // R(theta), theta in (-pi, pi) \ {0}
    double theta = 0.0;
};
struct N2mUnitBlock {       // unit-circle Jordan, even; B user-supplied (may be zero)
    double theta = 0.0;     // signed angle of the eigenvalue e^{i theta}
    int m = 1;
    std::optional<Mat> b_blocks;  // 2m x 2m; defaults to zero
};
struct N2mPlus1UnitBlock {  // unit-circle Jordan, odd; F,G,B solved unless supplied
    double theta = 0.0;     // unsigned angle parameter in (0, pi)
    int b_last = -1;        // +-1 selector, fixes theta-hat = -+theta
    int m = 1;
    std::optional<Vec> f, g;      // 2m columns
    std::optional<Mat> b_blocks;  // 2m x 2m
};
struct MmBlock {            // diag(A_m(lambda), C_m(lambda)), |lambda| != 0, 1
    double lambda = 2.0;
    int m = 1;
};
struct N2mQuadBlock {       // eigenvalue quadruple rho e^{+-i theta}, rho^{-1} e^{+-i theta}
    double rho = 2.0;
    double theta = 1.0;     // in (0, pi)
    int m = 1;
};

using NormalFormBlock = std::variant<N1Block, NmBlock, RotationBlock, N2mUnitBlock,
                                     N2mPlus1UnitBlock, MmBlock, N2mQuadBlock>;

Mat build_normal_form(const NormalFormBlock& block);
int block_half_dim(const NormalFormBlock& block);

// Jordan/triangular pieces shared with the closed-form logarithms.
Mat jordan_a(double lambda, int m);           // A_m(lambda)
Mat lower_c(double lambda, int m);            // C_m(lambda)
Mat lower_b(double lambda, const std::vector<double>& b);  // B_m(lambda, b)
Mat block_jordan_a(const Mat& r, int m);      // R-diagonal with I_2 superdiagonal
Mat block_lower_c(double theta, int m, double scale);  // -(-scale)^{k} R(k theta) pattern

// --- eigenvalue classification ---------------------------------------------

enum class EigenKind { One, MinusOne, UnitNonReal, PositiveReal, NegativeReal, ComplexQuadruple };

struct EigenClass {
    EigenKind kind = EigenKind::One;
    double theta = 0.0;   // UnitNonReal / ComplexQuadruple, canonical in (0, pi)
    double lambda = 0.0;  // PositiveReal (>1) / NegativeReal (<-1)
    double rho = 0.0;     // ComplexQuadruple (>1)
    int multiplicity = 1;
    int cardinality() const;  // eigenvalues represented per multiplicity unit
};

// Pairs/quadruples the spectrum, respecting the {lambda, conj, 1/lambda}
// symmetry; an eigenvalue sitting within tol of two class boundaries raises
// AmbiguityError carrying the value.
std::vector<EigenClass> classify_eigenvalues(const Mat& m, double tol = 1e-8);

int total_classified_dimension(const std::vector<EigenClass>& classes);

// --- randomized construction -----------------------------------------------

struct RandomSymplecticOptions {
    double conditioning_budget = 1.0;  // scales conjugator and parameter ranges
    bool allow_negative_real = true;
    bool allow_unit_eigenvalues = true;  // +-1 and unit-circle families
    bool jordan_blocks = false;          // include N_m / quadruple-Jordan pieces
};

struct RandomSymplectic {
    SymplecticMatrix matrix;
    std::vector<NormalFormBlock> blocks;
    Mat conjugator;
    std::vector<EigenClass> classes;
};

RandomSymplectic random_symplectic(int n, std::uint64_t seed,
                                   const RandomSymplecticOptions& opt = {});

// Random symmetric and random symplectic-conjugator helpers.
Mat random_symmetric(int dim, CounterRng& rng, double scale = 1.0);
Mat random_symplectic_conjugator(int n, CounterRng& rng, double scale = 0.5);

} // namespace sympcal
