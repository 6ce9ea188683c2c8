#include "tsr/dataset.hpp"

#include <Eigen/Dense>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsr/errors.hpp"

namespace tsr {

std::string design_name(DesignKind k) {
    switch (k) {
        case DesignKind::intercept_only: return "intercept_only";
        case DesignKind::quadratic_surface: return "quadratic_surface";
        case DesignKind::file_covariates: return "file_covariates";
    }
    throw ConfigError("unknown design kind");
}

DesignKind design_from_name(std::string_view name) {
    if (name == "intercept_only") return DesignKind::intercept_only;
    if (name == "quadratic_surface") return DesignKind::quadratic_surface;
    if (name == "file_covariates") return DesignKind::file_covariates;
    throw ConfigError("unknown design kind: " + std::string(name));
}

Eigen::MatrixXd build_design(const Eigen::Ref<const Eigen::MatrixXd>& coords,
                             DesignKind kind,
                             const Eigen::Ref<const Eigen::MatrixXd>& covariates) {
    const Eigen::Index n = coords.rows();
    switch (kind) {
        case DesignKind::intercept_only:
            return Eigen::MatrixXd::Ones(n, 1);
        case DesignKind::quadratic_surface: {
            if (coords.cols() != 2)
                throw DataError("quadratic surface design needs 2-D coordinates");
            Eigen::MatrixXd X(n, 6);
            X.col(0).setOnes();
            X.col(1) = coords.col(0);
            X.col(2) = coords.col(1);
            X.col(3) = coords.col(0).cwiseAbs2();
            X.col(4) = coords.col(1).cwiseAbs2();
            X.col(5) = coords.col(0).cwiseProduct(coords.col(1));
            return X;
        }
        case DesignKind::file_covariates: {
            if (covariates.rows() != n || covariates.cols() == 0)
                throw DataError("file_covariates design requires covariate columns");
            Eigen::MatrixXd X(n, covariates.cols() + 1);
            X.col(0).setOnes();
            X.rightCols(covariates.cols()) = covariates;
            return X;
        }
    }
    throw ConfigError("unknown design kind");
}

void validate(const SpatialDataset& d) {
    const Eigen::Index n = d.n();
    if (n == 0) throw DataError("dataset is empty");
    if (d.coords.rows() != n || d.X.rows() != n)
        throw DataError("coords, y, X row counts disagree");
    if (d.coords.cols() != 2) throw DataError("coords must be n x 2");
    if (!d.coords.allFinite() || !d.y.allFinite() || !d.X.allFinite())
        throw DataError("dataset contains non-finite values");
    const Eigen::Index p = d.p();
    if (p < 1 || n <= p)
        throw DesignError("need n > p >= 1, got n=" + std::to_string(n) +
                          ", p=" + std::to_string(p));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    if (qr.rank() < p)
        throw DesignError("design matrix is rank deficient (rank " +
                          std::to_string(qr.rank()) + " < p=" + std::to_string(p) +
                          ")");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

double parse_field(const std::string& s, const std::string& path, size_t lineno) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    double v = 0.0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{})
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": cannot parse number from '" + s + "'");
    return v;
}

}  // namespace

SpatialDataset read_dataset_csv(const std::string& path, DesignKind design) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "x_coord" || header[1] != "y_coord" ||
        header[2] != "response")
        throw DataError(path + ": header must start with x_coord,y_coord,response");
    const size_t ncov = header.size() - 3;

    std::vector<std::array<double, 3>> base;
    std::vector<double> covs;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        base.push_back({parse_field(fields[0], path, lineno),
                        parse_field(fields[1], path, lineno),
                        parse_field(fields[2], path, lineno)});
        for (size_t j = 0; j < ncov; ++j)
            covs.push_back(parse_field(fields[3 + j], path, lineno));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(base.size());
    if (n == 0) throw DataError(path + ": no data rows");

    SpatialDataset d;
    d.coords.resize(n, 2);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d.coords(i, 0) = base[i][0];
        d.coords(i, 1) = base[i][1];
        d.y(i) = base[i][2];
    }
    Eigen::MatrixXd covariates(n, static_cast<Eigen::Index>(ncov));
    for (Eigen::Index i = 0; i < n; ++i)
        for (size_t j = 0; j < ncov; ++j)
            covariates(i, static_cast<Eigen::Index>(j)) = covs[i * ncov + j];
    d.X = build_design(d.coords, design, covariates);
    d.has_intercept = true;
    validate(d);
    return d;
}

void write_dataset_csv(const std::string& path,
                       const Eigen::Ref<const Eigen::MatrixXd>& coords,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::Ref<const Eigen::MatrixXd>& covariates,
                       const std::vector<std::string>& covariate_names) {
    const Eigen::Index n = y.size();
    if (coords.rows() != n || (covariates.size() > 0 && covariates.rows() != n))
        throw DataError("write_dataset_csv: row counts disagree");
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "x_coord,y_coord,response";
    for (Eigen::Index j = 0; j < covariates.cols(); ++j) {
        if (static_cast<size_t>(j) < covariate_names.size())
            out << ',' << covariate_names[static_cast<size_t>(j)];
        else
            out << ",cov" << (j + 1);
    }
    out << '\n';
    char buf[32];
    const auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        emit(coords(i, 0));
        out << ',';
        emit(coords(i, 1));
        out << ',';
        emit(y(i));
        for (Eigen::Index j = 0; j < covariates.cols(); ++j) {
            out << ',';
            emit(covariates(i, j));
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace tsr
