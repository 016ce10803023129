#ifndef WELLCAST_MODEL_IO_HPP
#define WELLCAST_MODEL_IO_HPP

#include "wellcast/estimators.hpp"
#include "wellcast/windowing.hpp"

#include <filesystem>
#include <string>

namespace wellcast {

/**
 * A trained estimator together with everything needed to forecast with it:
 * window geometry, column schema, and normalization statistics.
 */
struct TrainedEstimator {
    EstimatorKind kind = EstimatorKind::Ols;
    LinearModel linear; // valid when kind != Mlp
    MlpModel mlp;       // valid when kind == Mlp
    WindowConfig window;
    Normalizer normalizer; // carries x_keys / y_keys

    std::string describe() const; // e.g. "ridge(alpha=0.2)", "mlp(20, identity)"

    /// Predict one normalized-space row for a raw input vector laid out per
    /// normalizer.x_keys: normalize, apply the model, denormalize.
    Eigen::VectorXd predict_raw(const Eigen::VectorXd& x_raw) const;
};

/// Versioned flat-text model file; parameters are written as shortest
/// round-trip decimals, so save/load reproduces every double bit-exactly.
void save_model(const TrainedEstimator& model, const std::filesystem::path& path);
TrainedEstimator load_model(const std::filesystem::path& path);

} // namespace wellcast

#endif
