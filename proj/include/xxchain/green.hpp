#ifndef XXCHAIN_GREEN_HPP
#define XXCHAIN_GREEN_HPP

#include "xxchain/types.hpp"

namespace xxchain {

enum class BandSide { below, in_band, above };

// Reduced energy x = E - omega0 in units of J, classified against the
// free band x in [-1, 1]. In-band points carry the retarded (+i0) limit.
struct EnergyPoint {
    double x = 0.0;
    BandSide side = BandSide::in_band;
};

// Classifies x; throws std::domain_error within `edge_tol` of a band edge,
// where the propagator has a square-root singularity.
EnergyPoint energy_point(double x, double edge_tol = 1e-13);

// Free-chain lattice Green function G0(delta; x) for site separation
// delta >= 0. Closed forms:
//   x < -1 :  -u^delta / sqrt(x^2-1),          u = -x - sqrt(x^2-1) in (0,1)
//   x > +1 :  (-1)^delta (x - sqrt(x^2-1))^delta / sqrt(x^2-1)
//   |x| < 1:  retarded limit -i e^{i theta |delta|} / sin(theta),
//             theta = acos(-x) in (0, pi)
cplx green_free(int delta, const EnergyPoint& point);

// Scattering coefficient of a single field defect of strength alpha:
//   t = -alpha / (2 + alpha G0(0; x)),
// the resummation v/(1 - v G0) of the on-site perturbation v = -alpha/2.
// Throws numerical_error at the defect's discrete-level pole.
cplx scattering_t(double alpha, const EnergyPoint& point);

// Free propagator entries and scattering coefficients entering the
// two-defect T-matrix at one energy.
struct ScatteringData {
    cplx t1, t2;
    cplx g11, g12, g21, g22; // G0(l_i, l_j); g12 = g21 = G0(d)
    cplx denom;              // 1 - t1 t2 G0(d)^2
};

ScatteringData scattering_data(const DefectConfig& defects, const EnergyPoint& point);

// Denominator 1 - t1 t2 G0(l1,l2) G0(l2,l1) of the multiple-scattering
// resummation, real off the band (|x| > 1). Vanishes at the discrete levels.
double tmatrix_denominator(const DefectConfig& defects, const EnergyPoint& point);

// Determinant det(1 - G0 V) of the two-site defect problem, rescaled by
// (2 sqrt(x^2-1))^2 to stay pole-free off the band:
//   below band:  (2w - a1)(2w - a2) - a1 a2 u^{2d}
//   above band:  (2w + a1)(2w + a2) - a1 a2 (x - w)^{2d}
// Shares its off-band zero set with tmatrix_denominator but remains smooth
// through the single-defect poles of t_i, which makes it the right object
// for bracketed root finding. Tends to 0 at the band edges without crossing.
double bound_state_determinant(const DefectConfig& defects, double x);

} // namespace xxchain

#endif
