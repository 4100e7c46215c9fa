#pragma once

#include "subtile/intmatrix.hpp"

#include <complex>
#include <string>
#include <vector>

// Spectral data of a primitive substitution matrix. The dominant
// eigenvalue mu is the area inflation per subdivision step; the
// normalized right eigenvector nu gives the tile type frequencies; the
// second modulus r decides how fast counts converge to frequency.

namespace subtile {

struct eigen_cluster {
    std::complex<double> value;  // representative of a cluster of near-equal roots
    int multiplicity = 0;
};

struct perron_data {
    double mu = 0.0;
    std::vector<double> right;  // v, entrywise positive, normalized <v, w> = 1
    std::vector<double> left;   // w, entrywise positive
    std::vector<double> nu;     // v / sum(v)
    double second_modulus = 0.0;       // max |eta| over eigenvalues off mu's cluster
    std::vector<eigen_cluster> spectrum;  // clusters sorted by |value| descending
};

// Throws std::domain_error when the matrix is not primitive.
perron_data analyze_matrix(const intmatrix& m);

// True when every eigenvalue of modulus within tol of target_modulus has
// equal algebraic and geometric multiplicity, judged by rank(A) ==
// rank(A^2) for A = M - eta I over complex doubles.
bool semisimple_at_modulus(const intmatrix& m, double target_modulus);

// Exact variant: p must be an integer polynomial (lowest degree first)
// vanishing on the eigenvalues of interest. Semi-simplicity of all of
// p's roots that occur in the spectrum is rank p(M) == rank p(M)^2,
// computed fraction-free over the integers.
bool semisimple_by_polynomial(const intmatrix& m, const std::vector<long long>& p);

enum class regime { linear, linear_log, unsupported };

struct regime_report {
    regime kind = regime::unsupported;
    double lambda = 0.0;
    double mu = 0.0;
    double second_modulus = 0.0;
    bool semisimple = false;  // meaningful only when |r - lambda| is within tol
    std::string witness;      // one-line justification
};

// lambda is the geometric inflation; callers that only have a matrix may
// pass sqrt(mu). A non-primitive matrix classifies as unsupported.
regime_report classify_regime(const intmatrix& m, double lambda);

const char* regime_name(regime k);

// max_ij |M^l_ij - nu_i * colsum_j(M^l)|, the corollary deviation at level l.
double frequency_deviation(const intmatrix& m, unsigned l);

}  // namespace subtile
