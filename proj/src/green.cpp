#include "xxchain/green.hpp"

#include <cmath>

namespace xxchain {

namespace {
const cplx kI(0.0, 1.0);
}

EnergyPoint energy_point(double x, double edge_tol) {
    if (std::abs(std::abs(x) - 1.0) < edge_tol)
        throw std::domain_error("energy_point: band-edge singularity at |x| = 1");
    EnergyPoint p;
    p.x = x;
    p.side = x < -1.0 ? BandSide::below : (x > 1.0 ? BandSide::above : BandSide::in_band);
    return p;
}

cplx green_free(int delta, const EnergyPoint& point) {
    if (delta < 0)
        throw std::invalid_argument("green_free: delta must be >= 0");
    const double x = point.x;
    switch (point.side) {
    case BandSide::below: {
        const double w = std::sqrt(x * x - 1.0);
        const double u = -x - w; // in (0,1)
        return cplx(-std::pow(u, delta) / w, 0.0);
    }
    case BandSide::above: {
        const double w = std::sqrt(x * x - 1.0);
        const double u = x - w; // in (0,1)
        const double sign = (delta % 2 == 0) ? 1.0 : -1.0;
        return cplx(sign * std::pow(u, delta) / w, 0.0);
    }
    case BandSide::in_band: {
        const double theta = std::acos(-x); // in (0, pi)
        return -kI * std::exp(kI * (theta * delta)) / std::sin(theta);
    }
    }
    return {};
}

cplx scattering_t(double alpha, const EnergyPoint& point) {
    if (alpha == 0.0)
        return {};
    const cplx den = 2.0 + alpha * green_free(0, point);
    if (std::abs(den) < 1e-12) {
        // pole location for reference: 2 + alpha G0(0; x) = 0 at
        // |x| = sqrt(1 + alpha^2/4) on the side bound by sign(alpha)
        const double xp = std::sqrt(1.0 + alpha * alpha / 4.0);
        throw numerical_error("scattering_t: evaluation at the single-defect pole near |x| = " +
                              std::to_string(xp));
    }
    return -alpha / den;
}

ScatteringData scattering_data(const DefectConfig& defects, const EnergyPoint& point) {
    defects.validate();
    ScatteringData s;
    s.g11 = s.g22 = green_free(0, point);
    s.g12 = s.g21 = green_free(defects.distance(), point);
    s.t1 = scattering_t(defects.alpha1, point);
    s.t2 = scattering_t(defects.alpha2, point);
    s.denom = 1.0 - s.t1 * s.t2 * s.g12 * s.g21;
    return s;
}

double tmatrix_denominator(const DefectConfig& defects, const EnergyPoint& point) {
    if (point.side == BandSide::in_band)
        throw std::domain_error("tmatrix_denominator: defined off the band (|x| > 1)");
    return scattering_data(defects, point).denom.real();
}

double bound_state_determinant(const DefectConfig& defects, double x) {
    if (std::abs(x) <= 1.0)
        throw std::domain_error("bound_state_determinant: requires |x| > 1");
    const double a1 = defects.alpha1, a2 = defects.alpha2;
    const int d = defects.distance();
    const double w = std::sqrt(x * x - 1.0);
    if (x < -1.0) {
        const double u = -x - w;
        return (2.0 * w - a1) * (2.0 * w - a2) - a1 * a2 * std::pow(u, 2 * d);
    }
    const double u = x - w;
    return (2.0 * w + a1) * (2.0 * w + a2) - a1 * a2 * std::pow(u, 2 * d);
}

} // namespace xxchain
