#ifndef CAE_CLASSIFY_HPP
#define CAE_CLASSIFY_HPP

#include <vector>

#include "cae/rng.hpp"
#include "cae/types.hpp"

namespace cae {

/// Multinomial logistic regression parameters.
struct LinearClassifier {
    Matrix weights; // C x M
    Vector bias;    // C
    std::vector<int> classes;
};

/// Full-batch gradient descent on the multinomial cross-entropy with an L2
/// weight penalty. Deterministic for a seed. Throws ValidationError when the
/// labels cover fewer than two classes.
LinearClassifier logreg_train(const Matrix& x, const std::vector<int>& y, double l2,
                              Index epochs, double lr, Rng& rng);

std::vector<int> logreg_predict(const LinearClassifier& clf, const Matrix& x);

/// Cross-entropy + L2 value and gradients at the given parameters (exposed for
/// the finite-difference check).
double logreg_loss_and_grads(const Matrix& x, const std::vector<int>& y_idx, Index n_classes,
                             const Matrix& weights, const Vector& bias, double l2,
                             Matrix& d_weights, Vector& d_bias);

/// Euclidean k-nearest-neighbour vote. Ties break toward the class with the
/// smaller summed distance, then the smaller label.
std::vector<int> knn_classify(const Matrix& train_x, const std::vector<int>& train_y,
                              const Matrix& query_x, Index k);

struct ClassifierSpec {
    enum class Kind { logreg, knn } kind = Kind::logreg;
    double l2 = 1e-4;
    Index epochs = 500;
    double lr = 0.1;
    Index k = 5;
};

struct CvReport {
    std::vector<double> per_fold_error;
    double mean_error = 0.0;
    double std_error = 0.0;
    Index train_size = 0;
};

/// Repeated holdout: each fold draws a class-balanced train subset of
/// train_size and a disjoint test set of test_size from the same pool.
CvReport cross_validate(const Matrix& x, const std::vector<int>& y, Index train_size,
                        Index folds, Index test_size, const ClassifierSpec& spec, Rng& rng);

/// Pool variant: train subsets come from the train pool, test sets from the
/// separate test pool (the fixed-test-pool protocol).
CvReport cross_validate_pools(const Matrix& train_x, const std::vector<int>& train_y,
                              const Matrix& test_x, const std::vector<int>& test_y,
                              Index train_size, Index folds, Index test_size,
                              const ClassifierSpec& spec, Rng& rng);

struct Pca2d {
    Matrix projection;  // B x 2
    Vector component_1; // unit loading vectors
    Vector component_2;
    double variance_1 = 0.0;
    double variance_2 = 0.0;
};

/// Mean-centered projection onto the top-2 principal directions, computed by
/// power iteration with deflation (tolerance 1e-10). Component signs are fixed
/// so the largest-magnitude loading is positive.
Pca2d pca_2d_full(const Matrix& x);

Matrix pca_2d(const Matrix& x);

} // namespace cae

#endif
