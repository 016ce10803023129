#include "wellcast/estimators.hpp"

#include "wellcast/errors.hpp"
#include "wellcast/rng.hpp"

#include <cmath>
#include <vector>

namespace wellcast {

std::string_view estimator_name(EstimatorKind k) {
    switch (k) {
    case EstimatorKind::Ols: return "ols";
    case EstimatorKind::Ridge: return "ridge";
    case EstimatorKind::Lasso: return "lasso";
    case EstimatorKind::Mlp: return "mlp";
    }
    return "?";
}

EstimatorKind estimator_from_name(std::string_view name) {
    if (name == "ols" || name == "linear") return EstimatorKind::Ols;
    if (name == "ridge") return EstimatorKind::Ridge;
    if (name == "lasso") return EstimatorKind::Lasso;
    if (name == "mlp") return EstimatorKind::Mlp;
    throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

std::string_view activation_name(Activation a) {
    switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    }
    return "?";
}

Activation activation_from_name(std::string_view name) {
    if (name == "identity") return Activation::Identity;
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

namespace {

void check_fit_inputs(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw DataError("cannot fit on an empty design matrix");
    }
    if (y.rows() != x.rows() || y.cols() == 0) {
        throw DataError("target matrix shape does not match the design matrix");
    }
    if (!x.allFinite() || !y.allFinite()) {
        throw NumericError("fit input contains non-finite values");
    }
}

struct Centered {
    Eigen::MatrixXd xc, yc;
    Eigen::RowVectorXd x_mean, y_mean;
};

Centered center(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Centered c;
    c.x_mean = x.colwise().mean();
    c.y_mean = y.colwise().mean();
    c.xc = x.rowwise() - c.x_mean;
    c.yc = y.rowwise() - c.y_mean;
    return c;
}

Eigen::VectorXd intercept_from(const Centered& c, const Eigen::MatrixXd& w) {
    return c.y_mean.transpose() - w.transpose() * c.x_mean.transpose();
}

} // namespace

LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    check_fit_inputs(x, y);
    const Centered c = center(x, y);
    LinearModel model;
    model.kind = EstimatorKind::Ols;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(c.xc);
    model.rank_deficient = cod.rank() < c.xc.cols();
    if (model.rank_deficient) {
        // Minimum-norm solve stabilized with a tiny ridge term.
        const double damping = 1e-10;
        Eigen::MatrixXd gram = c.xc.transpose() * c.xc;
        gram.diagonal().array() += damping;
        model.weights = gram.ldlt().solve(c.xc.transpose() * c.yc);
    } else {
        model.weights = cod.solve(c.yc);
    }
    model.intercept = intercept_from(c, model.weights);
    if (!model.weights.allFinite()) {
        throw NumericError("least-squares solve produced non-finite weights");
    }
    return model;
}

LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha) {
    if (alpha < 0.0) {
        throw ConfigError("ridge alpha must be >= 0");
    }
    if (alpha == 0.0) {
        LinearModel model = fit_ols(x, y);
        model.kind = EstimatorKind::Ridge;
        return model;
    }
    check_fit_inputs(x, y);
    const Centered c = center(x, y);
    Eigen::MatrixXd gram = c.xc.transpose() * c.xc;
    gram.diagonal().array() += alpha;
    LinearModel model;
    model.kind = EstimatorKind::Ridge;
    model.alpha = alpha;
    model.weights = gram.ldlt().solve(c.xc.transpose() * c.yc);
    model.intercept = intercept_from(c, model.weights);
    if (!model.weights.allFinite()) {
        throw NumericError("ridge solve produced non-finite weights");
    }
    return model;
}

LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha,
                      double tol, int max_iter) {
    if (alpha < 0.0) {
        throw ConfigError("lasso alpha must be >= 0");
    }
    if (tol <= 0.0) {
        throw ConfigError("lasso tolerance must be > 0");
    }
    check_fit_inputs(x, y);
    const Centered c = center(x, y);
    const long p = x.cols();
    const long m = y.cols();

    // Covariance-form cyclic coordinate descent with soft thresholding.
    const Eigen::MatrixXd gram = c.xc.transpose() * c.xc;
    const Eigen::MatrixXd xty = c.xc.transpose() * c.yc;
    const Eigen::VectorXd diag = gram.diagonal();

    LinearModel model;
    model.kind = EstimatorKind::Lasso;
    model.alpha = alpha;
    model.weights = Eigen::MatrixXd::Zero(p, m);
    model.converged = true;
    int worst_iterations = 0;
    for (long col = 0; col < m; ++col) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd gram_w = Eigen::VectorXd::Zero(p); // gram * w, updated incrementally
        bool col_converged = false;
        int sweep = 0;
        for (; sweep < max_iter; ++sweep) {
            double max_delta = 0.0;
            for (long j = 0; j < p; ++j) {
                if (diag(j) <= 0.0) {
                    continue; // constant column: coefficient stays 0
                }
                const double rho = xty(j, col) - gram_w(j) + diag(j) * w(j);
                double wj = 0.0;
                const double threshold = alpha / 2.0;
                if (rho > threshold) {
                    wj = (rho - threshold) / diag(j);
                } else if (rho < -threshold) {
                    wj = (rho + threshold) / diag(j);
                }
                const double delta = wj - w(j);
                if (delta != 0.0) {
                    gram_w += delta * gram.col(j);
                    w(j) = wj;
                    max_delta = std::max(max_delta, std::abs(delta));
                }
            }
            if (max_delta < tol) {
                col_converged = true;
                ++sweep;
                break;
            }
        }
        model.weights.col(col) = w;
        model.converged = model.converged && col_converged;
        worst_iterations = std::max(worst_iterations, sweep);
    }
    model.iterations = worst_iterations;
    model.intercept = intercept_from(c, model.weights);
    return model;
}

namespace {

Eigen::MatrixXd apply_activation(Activation a, const Eigen::MatrixXd& z) {
    switch (a) {
    case Activation::Identity: return z;
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Tanh: return z.array().tanh();
    }
    return z;
}

Eigen::MatrixXd activation_derivative(Activation a, const Eigen::MatrixXd& z,
                                      const Eigen::MatrixXd& h) {
    switch (a) {
    case Activation::Identity: return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    case Activation::Relu:
        return (z.array() > 0.0).cast<double>();
    case Activation::Tanh: return 1.0 - h.array().square();
    }
    return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

} // namespace

std::pair<double, MlpGradients> mlp_loss_and_grad(const MlpModel& model, const Eigen::MatrixXd& x,
                                                  const Eigen::MatrixXd& y) {
    if (x.rows() == 0) {
        throw DataError("mlp batch is empty");
    }
    if (x.cols() != model.w_in.rows() || y.cols() != model.w_out.cols() || y.rows() != x.rows()) {
        throw SchemaError("mlp batch shape does not match the model");
    }
    const double n_elems = double(y.rows()) * double(y.cols());

    const Eigen::MatrixXd z = (x * model.w_in).rowwise() + model.b_hidden.transpose();
    const Eigen::MatrixXd h = apply_activation(model.activation, z);
    const Eigen::MatrixXd out = (h * model.w_out).rowwise() + model.b_out.transpose();

    const Eigen::MatrixXd err = out - y;
    const double loss = err.squaredNorm() / n_elems;

    // d(loss)/d(out) = 2 err / n_elems, propagated backwards.
    const Eigen::MatrixXd d_out = (2.0 / n_elems) * err;
    MlpGradients g;
    g.w_out = h.transpose() * d_out;
    g.b_out = d_out.colwise().sum();
    const Eigen::MatrixXd d_hidden =
        (d_out * model.w_out.transpose()).cwiseProduct(activation_derivative(model.activation, z, h));
    g.w_in = x.transpose() * d_hidden;
    g.b_hidden = d_hidden.colwise().sum();
    return {loss, std::move(g)};
}

namespace {

struct AdamState {
    Eigen::MatrixXd m, v;

    explicit AdamState(long rows, long cols)
        : m(Eigen::MatrixXd::Zero(rows, cols)), v(Eigen::MatrixXd::Zero(rows, cols)) {}

    void update(Eigen::Ref<Eigen::MatrixXd> param, const Eigen::MatrixXd& grad,
                const MlpTrainConfig& cfg, double bias1, double bias2) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.array().square().matrix();
        const Eigen::ArrayXXd m_hat = m.array() / bias1;
        const Eigen::ArrayXXd v_hat = v.array() / bias2;
        param.array() -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
};

double forward_loss(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    const Eigen::MatrixXd z = (x * model.w_in).rowwise() + model.b_hidden.transpose();
    const Eigen::MatrixXd h = apply_activation(model.activation, z);
    const Eigen::MatrixXd out = (h * model.w_out).rowwise() + model.b_out.transpose();
    return (out - y).squaredNorm() / (double(y.rows()) * double(y.cols()));
}

} // namespace

MlpModel fit_mlp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::MatrixXd& x_val,
                 const Eigen::MatrixXd& y_val, int hidden_size, Activation activation,
                 const MlpTrainConfig& cfg) {
    check_fit_inputs(x, y);
    if (hidden_size < 1) {
        throw ConfigError("mlp hidden size must be >= 1");
    }
    if (cfg.learning_rate < 0.0 || cfg.beta1 <= 0.0 || cfg.beta2 <= 0.0) {
        throw ConfigError("mlp rates must be positive");
    }
    if (cfg.patience < 1) {
        throw ConfigError("mlp patience must be >= 1");
    }
    const bool has_val = x_val.rows() > 0;
    if (has_val && (x_val.cols() != x.cols() || y_val.cols() != y.cols())) {
        throw SchemaError("validation matrices do not match the training shape");
    }

    const long n_in = x.cols();
    const long n_out = y.cols();
    const long h = hidden_size;

    // Symmetric uniform init scaled by fan-in + fan-out.
    Rng rng(cfg.seed);
    MlpModel model;
    model.activation = activation;
    const double lim_in = std::sqrt(6.0 / double(n_in + h));
    const double lim_out = std::sqrt(6.0 / double(h + n_out));
    model.w_in.resize(n_in, h);
    for (long r = 0; r < n_in; ++r) {
        for (long c = 0; c < h; ++c) {
            model.w_in(r, c) = rng.uniform(-lim_in, lim_in);
        }
    }
    model.b_hidden = Eigen::VectorXd::Zero(h);
    model.w_out.resize(h, n_out);
    for (long r = 0; r < h; ++r) {
        for (long c = 0; c < n_out; ++c) {
            model.w_out(r, c) = rng.uniform(-lim_out, lim_out);
        }
    }
    model.b_out = Eigen::VectorXd::Zero(n_out);

    AdamState s_win(n_in, h), s_bh(h, 1), s_wout(h, n_out), s_bo(n_out, 1);

    const long n_rows = x.rows();
    const long batch = cfg.batch_size > 0 ? std::min<long>(cfg.batch_size, n_rows) : n_rows;

    MlpModel best = model;
    double best_monitor = forward_loss(model, has_val ? x_val : x, has_val ? y_val : y);
    int stale = 0;
    long adam_step = 0;

    std::vector<long> order(static_cast<size_t>(n_rows));
    for (long r = 0; r < n_rows; ++r) {
        order[size_t(r)] = r;
    }

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        if (batch < n_rows) {
            // Fisher-Yates with the deterministic stream.
            for (long r = n_rows - 1; r > 0; --r) {
                const long j = long(rng.below(uint64_t(r + 1)));
                std::swap(order[size_t(r)], order[size_t(j)]);
            }
        }
        for (long begin = 0; begin < n_rows; begin += batch) {
            const long count = std::min(batch, n_rows - begin);
            Eigen::MatrixXd xb, yb;
            const Eigen::MatrixXd* px = &x;
            const Eigen::MatrixXd* py = &y;
            if (batch < n_rows) {
                xb.resize(count, n_in);
                yb.resize(count, n_out);
                for (long r = 0; r < count; ++r) {
                    xb.row(r) = x.row(order[size_t(begin + r)]);
                    yb.row(r) = y.row(order[size_t(begin + r)]);
                }
                px = &xb;
                py = &yb;
            }
            auto [loss, grad] = mlp_loss_and_grad(model, *px, *py);
            if (!std::isfinite(loss)) {
                throw NumericError("mlp training diverged at epoch " + std::to_string(epoch));
            }
            ++adam_step;
            const double bias1 = 1.0 - std::pow(cfg.beta1, double(adam_step));
            const double bias2 = 1.0 - std::pow(cfg.beta2, double(adam_step));
            s_win.update(model.w_in, grad.w_in, cfg, bias1, bias2);
            s_bh.update(model.b_hidden, grad.b_hidden, cfg, bias1, bias2);
            s_wout.update(model.w_out, grad.w_out, cfg, bias1, bias2);
            s_bo.update(model.b_out, grad.b_out, cfg, bias1, bias2);
        }
        const double monitor = forward_loss(model, has_val ? x_val : x, has_val ? y_val : y);
        if (!std::isfinite(monitor)) {
            throw NumericError("mlp training diverged at epoch " + std::to_string(epoch));
        }
        if (monitor < best_monitor - 1e-15) {
            best_monitor = monitor;
            best = model;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            break;
        }
    }
    return best;
}

Eigen::MatrixXd predict(const LinearModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.weights.rows()) {
        throw SchemaError("input has " + std::to_string(x.cols()) + " columns, model expects " +
                          std::to_string(model.weights.rows()));
    }
    return (x * model.weights).rowwise() + model.intercept.transpose();
}

Eigen::MatrixXd predict(const MlpModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.w_in.rows()) {
        throw SchemaError("input has " + std::to_string(x.cols()) + " columns, model expects " +
                          std::to_string(model.w_in.rows()));
    }
    const Eigen::MatrixXd z = (x * model.w_in).rowwise() + model.b_hidden.transpose();
    const Eigen::MatrixXd h = apply_activation(model.activation, z);
    return (h * model.w_out).rowwise() + model.b_out.transpose();
}

} // namespace wellcast
