#pragma once

#include "dcqed/elliptic.hpp"

namespace dcqed {

// Frequency point nu + i*kappa in units of Delta/hbar.
struct ComplexFreq {
    double nu = 0.0;
    double kappa = 0.0;
};

namespace mb {

constexpr double kGapGuard = 1e-6;

// With a = (nu - i kappa)/2 and abar = (nu + i kappa)/2:
//   k = (a-1)/(a+1), k' = sqrt(1-k^2), k1 = (abar+1)/(a-1), e^{i theta} = e^{i phi} = (abar-1)/(a-1).
// This is the supplement's (omega - i kappa) kernel; the main-text modulus is conj(k).
struct EllipticModuli {
    Complex k;
    Complex k_prime;
    Complex k1;
    Complex phase_theta;
    Complex phase_phi;
};

EllipticModuli moduli(ComplexFreq freq, double eps_gap = kGapGuard);

// sigma/sigma_n = sigma1 - i sigma2 at T = 0, continued to kappa > 0 (nu > 2).
Complex sigma_tilde(ComplexFreq freq, double eps_gap = kGapGuard);

struct SigmaParts {
    Complex region_i;  // pair-breaking window 1-nu < E < -1
    Complex residual;  // -1 < E < 1, zero real part at kappa = 0
    Complex total() const { return region_i + residual; }
};
SigmaParts sigma_tilde_parts(ComplexFreq freq, double eps_gap = kGapGuard);

// Real axis, nu > 0. sigma1 = 0 for nu <= 2.
Complex sigma_real_axis(double nu);

struct OracleOptions {
    double tolerance = 1e-10;
    bool drop_residual_regions = false;
};

struct OracleResult {
    Complex region_i;
    Complex region_ii;
    Complex region_iii;
    Complex value;
    double error = 0.0;
};

// Direct quadrature of the three energy windows, divided by (nu - i kappa).
OracleResult sigma_oracle_detail(ComplexFreq freq, const OracleOptions& options = {});
Complex sigma_oracle(ComplexFreq freq, const OracleOptions& options = {});

// Oracle integrand at real energy E; kappa may carry either sign. At kappa = 0 the
// branch of sqrt((E + i kappa)^2 - 1) is the kappa -> 0+ limit.
Complex oracle_integrand(double energy, double nu, double kappa);

}  // namespace mb
}  // namespace dcqed
