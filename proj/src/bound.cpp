#include "xxchain/bound.hpp"

#include <algorithm>
#include <cmath>

namespace xxchain {

namespace {

// The defect-space determinant factorizes over the two roots of its
// quadratic in y = 2 sqrt(x^2-1):
//   below band: (y - a1)(y - a2) - a1 a2 u^{2d}  = (y - y+)(y - y-)
//   above band: (y + a1)(y + a2) - a1 a2 q^{2d}  = (y - y+)(y - y-)
// with y+- = (S +- sqrt((a1-a2)^2 + 4 a1 a2 q^{2d})) / 2 and S = +-(a1+a2).
// Each branch 2w - y+-(x) carries at most one level, so bracketing them
// separately resolves near-degenerate pairs whose splitting ~ u^{2d} would
// fall inside a single scan cell of the product.
double level_branch(const DefectConfig& d, double x, bool upper) {
    const double w = std::sqrt(x * x - 1.0);
    const bool below = x < 0.0;
    const double q = below ? -x - w : x - w;
    const double q2d = std::pow(q, 2 * d.distance());
    const double s = below ? d.alpha1 + d.alpha2 : -(d.alpha1 + d.alpha2);
    const double diff = d.alpha1 - d.alpha2;
    const double disc = std::sqrt(std::max(0.0, diff * diff + 4.0 * d.alpha1 * d.alpha2 * q2d));
    const double y = 0.5 * (s + (upper ? disc : -disc));
    return 2.0 * w - y;
}

template <typename F>
double bisect(const F& f, double lo, double hi, double flo, double tol) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scan points on one side of the band, ordered from deep toward the edge:
// uniform over the bulk plus log-spaced refinement near the edge, where
// shallow levels and near-degenerate pairs accumulate.
std::vector<double> scan_points(double edge, double far, const BoundSolveOptions& opts) {
    std::vector<double> xs;
    xs.reserve(opts.brackets + opts.edge_brackets + 2);
    const double span = far - edge; // signed, points away from the band
    for (int i = opts.brackets; i >= 1; --i)
        xs.push_back(edge + span * i / opts.brackets);
    const double eps_hi = std::abs(span) / opts.brackets;
    const double eps_lo = 1e-13;
    const double decades = std::log(eps_hi / eps_lo);
    const double dir = span > 0 ? 1.0 : -1.0;
    for (int i = 0; i <= opts.edge_brackets; ++i) {
        const double eps = eps_hi * std::exp(-decades * i / opts.edge_brackets);
        xs.push_back(edge + dir * eps);
    }
    return xs;
}

std::vector<double> roots_one_side(const DefectConfig& d, bool below,
                                   const BoundSolveOptions& opts) {
    const double amax = std::max(std::abs(d.alpha1), std::abs(d.alpha2));
    const double span = 2.0 + amax;
    const double edge = below ? -1.0 : 1.0;
    const double far = below ? -1.0 - span : 1.0 + span;
    const auto xs = scan_points(edge, far, opts);

    std::vector<double> roots;
    for (bool upper : {false, true}) {
        auto f = [&](double x) { return level_branch(d, x, upper); };
        double px = xs.front();
        double pf = f(px);
        for (size_t i = 1; i < xs.size(); ++i) {
            const double x = xs[i];
            const double fx = f(x);
            if ((pf < 0) != (fx < 0)) {
                const double lo = std::min(px, x), hi = std::max(px, x);
                const double flo = (lo == px) ? pf : fx;
                const double r = bisect(f, lo, hi, flo, opts.tol);
                // levels within 1e-9 of the edge are not normalizable
                if (std::abs(r) > 1.0 + 1e-9) roots.push_back(r);
                break; // one level per branch
            }
            px = x;
            pf = fx;
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                roots.end());
    return roots;
}

// Relative defect-site amplitudes (b_l1, b_l2) at a level, from the
// better-conditioned row of the 2x2 defect-space system
//   (2w -+ a1) b1 = +-s a2 q^d b2,   (2w -+ a2) b2 = +-s a1 q^d b1,
// upper signs below the band (q = u, s = 1), lower signs above
// (q = x - w, s = -(-1)^d from the alternating propagator). A vanishing
// alpha needs no special case: the level then sits on the other defect.
void defect_amplitudes(const DefectConfig& d, double x, double& bl1, double& bl2) {
    const double w = std::sqrt(x * x - 1.0);
    const bool below = x < 0.0;
    const double q = below ? -x - w : x - w;
    const double s = below ? 1.0 : ((d.distance() % 2) ? 1.0 : -1.0);
    const double qd = s * std::pow(q, d.distance());
    const double m1 = 2.0 * w + (below ? -d.alpha1 : d.alpha1);
    const double m2 = 2.0 * w + (below ? -d.alpha2 : d.alpha2);
    if (std::abs(m2) > std::abs(m1)) {
        bl1 = m2;
        bl2 = d.alpha1 * qd;
    } else {
        bl1 = d.alpha2 * qd;
        bl2 = m1;
    }
    if (bl1 < 0 || (bl1 == 0.0 && bl2 < 0)) {
        bl1 = -bl1;
        bl2 = -bl2;
    }
}

BoundState assemble_state(const DefectConfig& d, double omega0, double x) {
    BoundState s;
    s.x_loc = x;
    s.energy = omega0 + x;
    const bool below = x < 0.0;
    const double w = std::sqrt(x * x - 1.0);
    const double q = below ? -x - w : x - w;
    s.xi = -std::log(q);

    double bl1, bl2;
    defect_amplitudes(d, x, bl1, bl2);
    double w1 = d.alpha1 * bl1;
    double w2 = d.alpha2 * bl2;
    if (d.alpha1 == d.alpha2) {
        // the symmetric configuration has exact +-K structure
        w2 = (w2 >= 0 ? 1.0 : -1.0) * std::abs(w1);
        s.parity = w2 > 0 ? Parity::symmetric : Parity::antisymmetric;
    }

    // reported weights follow K_i = sqrt(alpha_i / |2 sqrt(x^2-1) - alpha_i|)
    // with the signs above; a defect sitting exactly on its single-level pole
    // (the other strength zero) gets weight 1 by convention
    auto k_mag = [&](double a) {
        const double den = std::abs(2.0 * w - (below ? a : -a));
        return den < 1e-12 ? 1.0 : std::sqrt(std::abs(a) / den);
    };
    s.k1 = (w1 == 0.0) ? 0.0 : (w1 > 0 ? 1.0 : -1.0) * k_mag(d.alpha1);
    s.k2 = (w2 == 0.0) ? 0.0 : (w2 > 0 ? 1.0 : -1.0) * k_mag(d.alpha2);

    // window wide enough that both exponential tails are below 1e-12
    const double step = below ? 1.0 : -1.0; // above-band tails alternate
    const int lo = std::min(d.l1, d.l2), hi = std::max(d.l1, d.l2);
    const int reach = static_cast<int>(std::ceil(-std::log(1e-12) / s.xi)) + 2;
    s.window_first = lo - reach;
    const int n = hi + reach - s.window_first + 1;
    s.b.resize(n);
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) {
        const int site = s.window_first + i;
        const int d1 = std::abs(site - d.l1), d2 = std::abs(site - d.l2);
        const double e1 = (d1 % 2 ? step : 1.0) * std::pow(q, d1);
        const double e2 = (d2 % 2 ? step : 1.0) * std::pow(q, d2);
        const double v = w1 * e1 + w2 * e2;
        s.b[i] = v;
        nrm += v * v;
    }
    s.b /= std::sqrt(nrm);
    if (s.b[d.l1 - s.window_first] < 0 ||
        (s.b[d.l1 - s.window_first] == 0.0 && s.b[d.l2 - s.window_first] < 0))
        s.b = -s.b;
    return s;
}

} // namespace

std::vector<BoundState> find_bound_states(const DefectConfig& defects, double omega0,
                                          const BoundSolveOptions& opts) {
    defects.validate();
    if (defects.alpha1 == 0.0 && defects.alpha2 == 0.0) return {};
    std::vector<double> roots = roots_one_side(defects, true, opts);
    const auto above = roots_one_side(defects, false, opts);
    roots.insert(roots.end(), above.begin(), above.end());
    std::sort(roots.begin(), roots.end());
    std::vector<BoundState> states;
    states.reserve(roots.size());
    for (double x : roots)
        states.push_back(assemble_state(defects, omega0, x));
    return states;
}

std::vector<double> closed_form_d1(double alpha1, double alpha2, double omega0) {
    const double p = alpha1 * alpha2;
    if (std::abs(1.0 - p) < 1e-6) {
        DefectConfig d{0, 1, alpha1, alpha2};
        std::vector<double> xs;
        for (const auto& s : find_bound_states(d, omega0)) xs.push_back(s.x_loc);
        return xs;
    }
    const double sum = alpha1 + alpha2;
    const double diff = alpha1 - alpha2;
    const double disc = (1.0 + diff * diff / 4.0) * (1.0 - p / 2.0) * (1.0 - p / 2.0);
    const double root = std::sqrt(disc);
    const double lead = p * sum / 4.0;

    std::vector<double> xs;
    for (double sgn : {+1.0, -1.0}) {
        const double x = (lead + sgn * root) / (1.0 - p);
        if (std::abs(x) <= 1.0) continue;
        // keep only candidates solving the unsquared level condition
        //   sqrt(x^2-1) (2 - p) = +-(sum + p x)  (+ below band, - above);
        // squaring it introduces mirror roots on the wrong side
        const double w = std::sqrt(x * x - 1.0);
        const double lhs = w * (2.0 - p);
        const double rhs = (x < 0 ? 1.0 : -1.0) * (sum + p * x);
        if (std::abs(lhs - rhs) < 1e-9 * (std::abs(lhs) + std::abs(rhs) + 1.0))
            xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

int existence_count(double alpha1, double alpha2, int d, double omega0) {
    if (alpha1 < 0 || alpha2 < 0)
        throw std::invalid_argument("existence_count: strengths must be >= 0");
    DefectConfig cfg{0, d, alpha1, alpha2};
    return static_cast<int>(find_bound_states(cfg, omega0).size());
}

std::map<int, double> ground_profile(const DefectConfig& defects, double omega0,
                                     int ref_site, int window_lo, int window_hi) {
    if (ref_site < window_lo || ref_site > window_hi)
        throw std::invalid_argument("ground_profile: ref_site outside window");
    const auto states = find_bound_states(defects, omega0);
    std::map<int, double> profile;
    if (states.empty()) return profile;
    const BoundState& gs = states.front();
    const double bref = gs.amplitude(ref_site);
    for (int n = window_lo; n <= window_hi; ++n)
        profile[n] = (n == ref_site) ? 0.0 : 2.0 * std::abs(bref * gs.amplitude(n));
    return profile;
}

std::vector<std::pair<int, double>> defect_concurrence_vs_distance(double alpha1, double alpha2,
                                                                   const std::vector<int>& d_range,
                                                                   double omega0) {
    std::vector<std::pair<int, double>> series;
    series.reserve(d_range.size());
    for (int d : d_range) {
        DefectConfig cfg{0, d, alpha1, alpha2};
        const auto states = find_bound_states(cfg, omega0);
        double c = 0.0;
        if (!states.empty()) {
            const BoundState& gs = states.front();
            c = 2.0 * std::abs(gs.amplitude(cfg.l1) * gs.amplitude(cfg.l2));
        }
        series.emplace_back(d, c);
    }
    return series;
}

} // namespace xxchain
