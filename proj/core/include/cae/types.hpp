#ifndef CAE_TYPES_HPP
#define CAE_TYPES_HPP

#include <Eigen/Dense>

namespace cae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

} // namespace cae

#endif
