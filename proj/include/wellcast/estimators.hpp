#ifndef WELLCAST_ESTIMATORS_HPP
#define WELLCAST_ESTIMATORS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace wellcast {

enum class EstimatorKind { Ols, Ridge, Lasso, Mlp };

std::string_view estimator_name(EstimatorKind k);
EstimatorKind estimator_from_name(std::string_view name);

enum class Activation { Identity, Relu, Tanh };

std::string_view activation_name(Activation a);
Activation activation_from_name(std::string_view name);

/**
 * Multi-output linear map y = x'W + b. Outputs are fitted as independent
 * columns sharing one design matrix; the intercept is never penalized.
 */
struct LinearModel {
    Eigen::MatrixXd weights;   // n_inputs x n_outputs
    Eigen::VectorXd intercept; // n_outputs
    EstimatorKind kind = EstimatorKind::Ols;
    double alpha = 0.0;
    bool rank_deficient = false; // OLS fell back to the damped/minimum-norm solve
    bool converged = true;       // Lasso coordinate descent converged
    int iterations = 0;          // Lasso sweeps used
};

/// Ordinary least squares; rank-deficient designs use a minimum-norm solve
/// and are flagged.
LinearModel fit_ols(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Minimizes sum of squared residuals + alpha * sum of squared weights
/// (no 1/n scaling), closed form on centered data.
LinearModel fit_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha);

/// Minimizes sum of squared residuals + alpha * sum of absolute weights via
/// cyclic coordinate descent with soft thresholding. Non-convergence within
/// max_iter sweeps returns the result with converged = false.
LinearModel fit_lasso(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha,
                      double tol = 1e-6, int max_iter = 10000);

/**
 * Single-hidden-layer perceptron with a linear output layer.
 */
struct MlpModel {
    Eigen::MatrixXd w_in;     // n_inputs x hidden
    Eigen::VectorXd b_hidden; // hidden
    Eigen::MatrixXd w_out;    // hidden x n_outputs
    Eigen::VectorXd b_out;    // n_outputs
    Activation activation = Activation::Identity;

    long hidden_size() const { return w_in.cols(); }
};

struct MlpTrainConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int max_epochs = 500;
    int batch_size = 0; // 0 = full batch
    int patience = 25;  // early stopping on validation loss
    uint64_t seed = 0;
};

struct MlpGradients {
    Eigen::MatrixXd w_in;
    Eigen::VectorXd b_hidden;
    Eigen::MatrixXd w_out;
    Eigen::VectorXd b_out;
};

/// Mean squared error over all batch elements plus its full gradient via
/// backpropagation.
std::pair<double, MlpGradients> mlp_loss_and_grad(const MlpModel& model, const Eigen::MatrixXd& x,
                                                  const Eigen::MatrixXd& y);

/// Train with Adam. Stops at max_epochs or when the validation loss has not
/// improved for `patience` epochs (the best-validation weights are restored).
/// With an empty validation set the training loss is monitored instead.
/// Deterministic for a fixed seed. Throws NumericError if the loss diverges.
MlpModel fit_mlp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::MatrixXd& x_val,
                 const Eigen::MatrixXd& y_val, int hidden_size, Activation activation,
                 const MlpTrainConfig& cfg);

Eigen::MatrixXd predict(const LinearModel& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd predict(const MlpModel& model, const Eigen::MatrixXd& x);

} // namespace wellcast

#endif
