#ifndef XXCHAIN_RECORD_HPP
#define XXCHAIN_RECORD_HPP

#include "xxchain/types.hpp"

#include <Eigen/Dense>

namespace xxchain {

enum class Method { analytic, oracle };

// Transfer amplitude f_{s->r}(t) and concurrence C_r(t) = |f| for one
// sender/receiver pair.
struct TransferRecord {
    int sender = 0;
    int receiver = 0;
    double omega0 = 2.0; // level spacing the amplitude phases refer to
    Eigen::VectorXd times;
    Eigen::VectorXcd f;
    Eigen::VectorXd concurrence;
    Method method = Method::analytic;
    bool horizon_ok = true;   // finite oracle free of boundary echoes
    bool selfcheck_ok = true; // quadrature node-doubling drift below 1e-4
    double selfcheck_drift = 0.0;
};

} // namespace xxchain

#endif
