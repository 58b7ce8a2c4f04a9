#include "strata/models.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace strata {

namespace {

constexpr double kProbClip = 1e-15;  // scikit-learn log_loss clipping

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^z) without overflow
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double clipped_bernoulli_loss(double p, int y) {
    p = std::clamp(p, kProbClip, 1.0 - kProbClip);
    return y == 1 ? -std::log(p) : -std::log1p(-p);
}

// Design matrix with appended bias column and the +-1 label vector.
void gather(const Dataset& data, const Coalition& c, Eigen::MatrixXd& X,
            Eigen::VectorXd& y01) {
    const int m = c.size();
    const int d = data.dim();
    X.resize(m, d + 1);
    y01.resize(m);
    int r = 0;
    for (int idx : c) {
        auto row = data.row(idx);
        for (int j = 0; j < d; ++j) X(r, j) = row[j];
        X(r, d) = 1.0;
        y01(r) = data.label(idx);
        ++r;
    }
}

double objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
                 const Eigen::VectorXd& w, double lambda) {
    Eigen::VectorXd z = X * w;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        loss += softplus(z(i)) - y01(i) * z(i);
    return loss / static_cast<double>(z.size()) + 0.5 * lambda * w.squaredNorm();
}

}  // namespace

double LogRegModel::predict_p(std::span<const double> x) const {
    if (prior_only) return prior_p;
    double z = weights.back();  // bias
    for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
    return sigmoid(z);
}

LogRegModel train_logreg(const Dataset& data, const Coalition& coalition,
                         double lambda, std::uint64_t /*seed*/) {
    if (coalition.is_empty())
        throw std::invalid_argument("train_logreg: empty coalition");
    if (!(lambda > 0.0))
        throw std::invalid_argument("train_logreg: lambda must be positive");

    const int d = data.dim();
    LogRegModel model;
    model.lambda = lambda;
    model.lipschitz_L = 1.0;
    model.kernel_bound_kappa = std::sqrt(static_cast<double>(d) + 1.0);

    int positives = 0;
    for (int idx : coalition) positives += data.label(idx);
    if (positives == 0 || positives == coalition.size()) {
        model.prior_only = true;
        model.prior_p = static_cast<double>(positives) / coalition.size();
        return model;
    }

    Eigen::MatrixXd X;
    Eigen::VectorXd y01;
    gather(data, coalition, X, y01);
    const double m = static_cast<double>(coalition.size());

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
    double f = objective(X, y01, w, lambda);

    for (int iter = 0; iter < kLogRegMaxIters; ++iter) {
        Eigen::VectorXd z = X * w;
        Eigen::VectorXd p = z.unaryExpr([](double v) { return sigmoid(v); });
        Eigen::VectorXd grad = X.transpose() * (p - y01) / m + lambda * w;
        double gnorm = grad.norm();
        if (gnorm <= kLogRegGradTol) {
            model.weights.assign(w.data(), w.data() + w.size());
            model.iterations = iter;
            model.grad_norm = gnorm;
            return model;
        }

        Eigen::VectorXd s = p.array() * (1.0 - p.array());
        Eigen::MatrixXd H = X.transpose() * s.asDiagonal() * X / m;
        H.diagonal().array() += lambda;
        Eigen::VectorXd step = H.llt().solve(grad);

        // Armijo backtracking keeps the damped Newton step monotone.
        double slope = grad.dot(step);
        double t = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
            double f_new = objective(X, y01, w - t * step, lambda);
            if (f_new <= f - 1e-4 * t * slope) {
                w -= t * step;
                f = f_new;
                break;
            }
            t *= 0.5;
        }
    }

    Eigen::VectorXd z = X * w;
    Eigen::VectorXd p = z.unaryExpr([](double v) { return sigmoid(v); });
    double gnorm = (X.transpose() * (p - y01) / m + lambda * w).norm();
    throw TrainingDiagnosticsError(gnorm, kLogRegMaxIters);
}

double average_log_loss(const LogRegModel& model, const Dataset& data,
                        const Coalition* subset) {
    double total = 0.0;
    int count = 0;
    auto add = [&](int i) {
        total += clipped_bernoulli_loss(model.predict_p(data.row(i)), data.label(i));
        ++count;
    };
    if (subset) {
        for (int i : *subset) add(i);
    } else {
        for (int i = 0; i < data.n(); ++i) add(i);
    }
    if (count == 0) throw std::invalid_argument("average_log_loss: empty sample");
    return total / count;
}

double heldout_value(const LogRegModel& model, const Dataset& heldout) {
    return -average_log_loss(model, heldout);
}

double heldout_accuracy(const LogRegModel& model, const Dataset& heldout) {
    int correct = 0;
    for (int i = 0; i < heldout.n(); ++i)
        correct += model.predict_label(heldout.row(i)) == heldout.label(i);
    return static_cast<double>(correct) / heldout.n();
}

double erm01_optimal_loss(std::span<const double> xs, std::span<const int> ys) {
    const int m = static_cast<int>(xs.size());
    if (m < 1) throw std::invalid_argument("erm01_optimal_loss: empty sample");
    if (ys.size() != xs.size())
        throw std::invalid_argument("erm01_optimal_loss: size mismatch");

    std::vector<int> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return xs[a] < xs[b]; });

    int total_ones = 0;
    for (int y : ys) total_ones += y;

    // Split position s: the first s sorted points fall left of the threshold.
    // Orientation A predicts 1 on the right, orientation B predicts 1 on the
    // left. Splits between equal x values are skipped: no threshold realizes
    // them, and unrealizable hypotheses would break the 1/m marginal bound.
    int ones_left = 0;
    int best = m;
    for (int s = 0; s <= m; ++s) {
        if (s > 0) ones_left += ys[order[static_cast<std::size_t>(s - 1)]];
        if (s > 0 && s < m &&
            xs[order[static_cast<std::size_t>(s - 1)]] ==
                xs[order[static_cast<std::size_t>(s)]])
            continue;
        int zeros_left = s - ones_left;
        int errors_a = ones_left + (m - s - (total_ones - ones_left));
        int errors_b = zeros_left + (total_ones - ones_left);
        best = std::min({best, errors_a, errors_b});
    }
    return static_cast<double>(best) / m;
}

double erm01_optimal_loss(const Dataset& data, const Coalition& coalition) {
    if (data.dim() != 1)
        throw std::invalid_argument("erm01_optimal_loss: threshold class needs 1-D data");
    if (coalition.is_empty())
        throw std::invalid_argument("erm01_optimal_loss: empty coalition");
    std::vector<double> xs;
    std::vector<int> ys;
    xs.reserve(static_cast<std::size_t>(coalition.size()));
    ys.reserve(static_cast<std::size_t>(coalition.size()));
    for (int i : coalition) {
        xs.push_back(data.row(i)[0]);
        ys.push_back(data.label(i));
    }
    return erm01_optimal_loss(xs, ys);
}

ValueFunction make_logistic_game(const Dataset& train, const Dataset& heldout,
                                 const LogisticGameOptions& options) {
    StabilityCertificate cert = options.certificate.value_or(StabilityCertificate{
        1.0, std::sqrt(static_cast<double>(train.dim()) + 1.0), options.lambda});

    const bool heldout_kind = options.kind == ValueFunction::Kind::NegativeHeldoutLoss;
    double empty_value;
    if (heldout_kind) {
        // Baseline: prior predictor matching the held-out class fraction.
        LogRegModel prior;
        prior.prior_only = true;
        prior.prior_p = heldout.positive_fraction();
        empty_value = heldout_value(prior, heldout);
    } else {
        empty_value = -std::log(2.0);  // p = 0.5 scores ln 2 on any sample
    }

    // Datasets are copied into the closure so the game owns its data.
    auto evaluator = [train, heldout, lambda = options.lambda,
                      seed = options.train_seed, heldout_kind,
                      empty_value](const Coalition& c) {
        if (c.is_empty()) return empty_value;
        LogRegModel model = train_logreg(train, c, lambda, seed);
        if (heldout_kind) return heldout_value(model, heldout);
        return -average_log_loss(model, train, &c);
    };

    return ValueFunction(std::move(evaluator), cert.marginal_bound_c(), options.kind,
                         options.baseline_filter, cert, options.enable_cache);
}

ValueFunction make_erm01_game(const Dataset& train) {
    if (train.dim() != 1)
        throw std::invalid_argument("make_erm01_game: requires 1-D data");
    return ValueFunction(
        [train](const Coalition& c) {
            if (c.is_empty()) return -0.5;  // random-guessing 0-1 loss
            return -erm01_optimal_loss(train, c);
        },
        /*marginal_bound_c=*/1.0, ValueFunction::Kind::NegativeTrainingLoss);
}

}  // namespace strata
