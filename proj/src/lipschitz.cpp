#include "ipalm/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "ipalm/errors.hpp"

namespace ipalm {

double spectral_norm(const Eigen::Ref<const Eigen::MatrixXd>& m, const PowerIterationOptions& opts) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ShapeError("spectral_norm: expected a nonempty square matrix");
    }
    if (!(opts.tol > 0.0)) throw ParameterError("spectral_norm: tolerance must be positive");

    const Eigen::Index n = m.rows();
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // golden-ratio sequence in [0, 1): deterministic and aperiodic
        const double frac = std::fmod(0.6180339887498949 * static_cast<double>(i + 1), 1.0);
        v(i) = 1.0 + 0.1 * (frac - 0.5);
    }
    v.normalize();

    double lambda = 0.0;
    double gap = 0.0;
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        const Eigen::VectorXd w = m * v;
        const double next = v.dot(w);
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        gap = std::abs(next - lambda);
        if (it > 0 && gap <= opts.tol * std::abs(next)) {
            return next * (1.0 + 10.0 * opts.tol);
        }
        lambda = next;
        v = w / wn;
    }
    std::ostringstream msg;
    msg << "spectral_norm: no convergence after " << opts.max_iter << " iterations (last gap " << gap
        << ", estimate " << lambda << ")";
    throw EstimationError(msg.str());
}

void validate(const BacktrackState& state) {
    if (!(state.lipschitz > 0.0) || !(state.growth > 1.0) || !(state.shrink > 0.0 && state.shrink <= 1.0) || !(state.floor > 0.0)) {
        throw ParameterError("backtracking needs L > 0, floor > 0, growth > 1 and shrink in (0, 1]");
    }
}

BacktrackResult backtrack_lipschitz(const std::function<double(const Tensor&)>& h, double h_at_x,
                                    const Tensor& grad_at_x, const Tensor& x,
                                    const std::function<Tensor(double)>& candidate_of, BacktrackState& state) {
    validate(state);
    const double slack = 1e-12 * (1.0 + std::abs(h_at_x));
    double lipschitz = std::max(state.shrink * state.lipschitz, state.floor);
    std::vector<double> tested;
    for (std::size_t round = 0; round <= state.max_rounds; ++round) {
        tested.push_back(lipschitz);
        Tensor next = candidate_of(lipschitz);
        const auto diff = (next.vec() - x.vec()).eval();
        const double model = h_at_x + grad_at_x.vec().dot(diff) + 0.5 * lipschitz * diff.squaredNorm();
        const double value = h(next);
        if (std::isfinite(value) && value <= model + slack) {
            state.lipschitz = lipschitz;
            return {lipschitz, std::move(next), std::move(tested)};
        }
        lipschitz *= state.growth;
    }
    std::ostringstream msg;
    msg << "backtracking exceeded " << state.max_rounds << " rounds (last L " << lipschitz / state.growth
        << "); gradient inconsistent with the smooth term?";
    throw EstimationError(msg.str());
}

}  // namespace ipalm
