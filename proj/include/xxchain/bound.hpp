#ifndef XXCHAIN_BOUND_HPP
#define XXCHAIN_BOUND_HPP

#include "xxchain/green.hpp"

#include <map>
#include <vector>

#include <Eigen/Dense>

namespace xxchain {

enum class Parity { symmetric, antisymmetric, none };

// One discrete level outside the band, with its bi-localized amplitude
//   b_n = const (K1 e^{-xi |n-l1|} + K2 e^{-xi |n-l2|}),
// stored on a window wide enough that both tails are below 1e-12 and
// normalized to unit l2 norm.
struct BoundState {
    double x_loc = 0.0;  // reduced energy, |x_loc| > 1
    double energy = 0.0; // omega0 + x_loc
    double xi = 0.0;     // inverse localization length, -ln u
    double k1 = 0.0;     // localization weights; signs carry the parity
    double k2 = 0.0;
    Parity parity = Parity::none;
    int window_first = 0;    // site label of b[0]
    Eigen::VectorXd b;       // normalized amplitudes over the window

    double amplitude(int site) const {
        const int i = site - window_first;
        return (i >= 0 && i < b.size()) ? b[i] : 0.0;
    }
    int window_last() const { return window_first + static_cast<int>(b.size()) - 1; }
};

struct BoundSolveOptions {
    int brackets = 2000;        // uniform scan resolution per side
    int edge_brackets = 256;    // extra log-spaced brackets toward each band edge
    double tol = 1e-13;         // bisection tolerance on x
};

// All discrete levels of the two-defect chain, sorted by energy (0, 1 or 2
// for this rank-2 perturbation). Root search brackets the rescaled
// determinant on (-1-L, -1) and (1, 1+L) with L = 2 + max|alpha|, then
// bisects; amplitudes come from the null vector of the 2x2 defect-space
// system together with the closed-form propagator tails.
std::vector<BoundState> find_bound_states(const DefectConfig& defects, double omega0,
                                          const BoundSolveOptions& opts = {});

// Nearest-neighbour (d = 1) closed form for the reduced level positions:
//   x = [ a1 a2 (a1+a2)/4 +- sqrt((1 + (a1-a2)^2/4)(1 - a1 a2/2)^2) ] / (1 - a1 a2)
// Both signs are evaluated; candidates are kept only if |x| > 1 and x solves
// the unsquared level condition on its own side of the band (squaring the
// condition introduces spurious mirror roots). Falls back to the numeric
// finder when a1 a2 is within 1e-6 of 1, where the expression degenerates.
std::vector<double> closed_form_d1(double alpha1, double alpha2, double omega0 = 2.0);

// Number of discrete levels for defect strengths alpha1, alpha2 >= 0 at
// distance d. Equals find_bound_states(...).size().
int existence_count(double alpha1, double alpha2, int d, double omega0 = 2.0);

// Ground-state concurrence profile C_{ref,n} = 2 |b_ref b_n| over
// [window_lo, window_hi] from the lowest discrete level. Empty when no
// level exists.
std::map<int, double> ground_profile(const DefectConfig& defects, double omega0,
                                     int ref_site, int window_lo, int window_hi);

// Ground-state concurrence between the two defects as a function of their
// distance; (d, C) pairs with C = 0 where no level exists.
std::vector<std::pair<int, double>> defect_concurrence_vs_distance(double alpha1, double alpha2,
                                                                   const std::vector<int>& d_range,
                                                                   double omega0 = 2.0);

} // namespace xxchain

#endif
