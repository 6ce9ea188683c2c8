#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

namespace tsr {

/// Observed spatial data: locations, response, full-rank design.
struct SpatialDataset {
    Eigen::MatrixXd coords;  // n x 2
    Eigen::VectorXd y;       // n
    Eigen::MatrixXd X;       // n x p
    bool has_intercept = true;

    Eigen::Index n() const { return y.size(); }
    Eigen::Index p() const { return X.cols(); }
};

/// How the design matrix is assembled from a CSV file.
/// intercept_only: X = [1]. quadratic_surface: (1, x1, x2, x1^2, x2^2, x1*x2)
/// in the coordinates. file_covariates: intercept column prepended to any
/// covariate columns found after `response`.
enum class DesignKind { intercept_only, quadratic_surface, file_covariates };

std::string design_name(DesignKind k);
DesignKind design_from_name(std::string_view name);

Eigen::MatrixXd build_design(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                             DesignKind kind,
                             const Eigen::Ref<const Eigen::MatrixXd>& covariates =
                                 Eigen::MatrixXd(0, 0));

/// Shape and finiteness checks plus a rank check on X (throws DesignError /
/// DataError).
void validate(const SpatialDataset& d);

/// CSV with header x_coord,y_coord,response[,covariate...].
SpatialDataset read_dataset_csv(const std::string& path,
                                DesignKind design = DesignKind::intercept_only);

/// Writes x_coord,y_coord,response plus optional covariate columns at full
/// precision (round-trips through read_dataset_csv).
void write_dataset_csv(const std::string& path,
                       const Eigen::Ref<const Eigen::MatrixXd>& coords,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::Ref<const Eigen::MatrixXd>& covariates =
                           Eigen::MatrixXd(0, 0),
                       const std::vector<std::string>& covariate_names = {});

}  // namespace tsr
