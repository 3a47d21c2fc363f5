#ifndef XXCHAIN_TYPES_HPP
#define XXCHAIN_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace xxchain {

inline constexpr const char* kVersion = "0.1.0";

using cplx = std::complex<double>;

// Thrown when a numerical procedure (root bracketing, quadrature or
// integrator self-check) fails to meet its accuracy contract.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an experiment's physical preconditions are not met
// (e.g. Rabi analysis with fewer than two discrete levels).
class protocol_error : public std::runtime_error {
public:
    explicit protocol_error(const std::string& what) : std::runtime_error(what) {}
};

enum class Boundary { ring, open };

// Global chain parameters. Site indices run -(n_sites-1)/2 ... +(n_sites-1)/2.
// The hopping is fixed to -1/2 so that the free band is [omega0-1, omega0+1]
// with dispersion E = omega0 - cos(theta); the coupling J = 1 is the energy unit.
struct ChainSpec {
    double omega0 = 2.0;   // qubit level spacing, must be > 1 (ordered phase)
    int n_sites = 501;     // odd, >= 3
    Boundary boundary = Boundary::ring;

    int half() const { return (n_sites - 1) / 2; }
    int min_site() const { return -half(); }
    int max_site() const { return half(); }
    // site label -> vector index
    int index(int site) const { return site + half(); }
    bool contains(int site) const { return site >= min_site() && site <= max_site(); }

    void validate() const {
        if (n_sites < 3 || n_sites % 2 == 0)
            throw std::invalid_argument("ChainSpec: n_sites must be odd and >= 3");
        if (!(omega0 > 1.0))
            throw std::invalid_argument("ChainSpec: omega0 must exceed 1 (ordered phase)");
    }
};

// Two local field defects: on-site energies shifted by -alpha_i/2 at l1, l2.
struct DefectConfig {
    int l1 = 0;
    int l2 = 1;
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    int distance() const { return l2 >= l1 ? l2 - l1 : l1 - l2; }

    void validate() const {
        if (l1 == l2)
            throw std::invalid_argument("DefectConfig: defect sites must differ");
    }
};

} // namespace xxchain

#endif
