#include <Eigen/Dense>
#include <cmath>

#include "fuelcast/errors.hpp"
#include "fuelcast/learn.hpp"

namespace fuelcast {

LinearModel fit_linear(const Matrix& x, std::span<const double> y, const LinearParams& params) {
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto p = static_cast<Eigen::Index>(x.cols());
  if (n < 1 || p < 1) throw ModelError("fit_linear: need at least one row and one column");
  if (y.size() != x.rows()) throw ModelError("fit_linear: target length does not match rows");
  if (!(params.lambda >= 0.0) || !std::isfinite(params.lambda)) throw ModelError("fit_linear: lambda must be >= 0");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw ModelError("fit_linear: non-finite feature value");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw ModelError("fit_linear: non-finite target value");
  }

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> xm(x.data().data(), n, p);
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);

  Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(p);
  double y_mean = 0.0;
  if (params.fit_intercept) {
    x_mean = xm.colwise().mean();
    y_mean = ym.mean();
  }

  // Ridge as an augmented least-squares problem [Xc; sqrt(lambda) I] w = [yc; 0]; the
  // complete orthogonal decomposition yields the minimum-norm solution when rank deficient.
  Eigen::MatrixXd a(n + p, p);
  a.topRows(n) = xm.rowwise() - x_mean;
  a.bottomRows(p) = std::sqrt(params.lambda) * Eigen::MatrixXd::Identity(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + p);
  b.head(n) = ym.array() - y_mean;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd w = cod.solve(b);

  LinearModel model;
  model.weights.assign(w.data(), w.data() + p);
  model.intercept = params.fit_intercept ? y_mean - x_mean.dot(w) : 0.0;
  model.ridge_lambda = params.lambda;
  model.fit_intercept = params.fit_intercept;
  for (double v : model.weights) {
    if (!std::isfinite(v)) throw ModelError("fit_linear: solution is not finite");
  }
  return model;
}

}  // namespace fuelcast
