#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cae/classify.hpp"
#include "cae/error.hpp"
#include "test_support.hpp"

using namespace cae;
namespace ts = cae::testsupport;

namespace {

// two well-separated gaussian blobs in 2-D
void make_blobs(Index per_class, std::uint64_t seed, Matrix& x, std::vector<int>& y) {
    Rng rng(seed);
    x.resize(2 * per_class, 2);
    y.resize(static_cast<std::size_t>(2 * per_class));
    for (Index i = 0; i < per_class; ++i) {
        x(i, 0) = rng.normal() * 0.4 - 3.0;
        x(i, 1) = rng.normal() * 0.4;
        y[static_cast<std::size_t>(i)] = 0;
        x(per_class + i, 0) = rng.normal() * 0.4 + 3.0;
        x(per_class + i, 1) = rng.normal() * 0.4;
        y[static_cast<std::size_t>(per_class + i)] = 1;
    }
}

} // namespace

TEST_SUITE("classify") {

TEST_CASE("logistic regression separates blobs") {
    Matrix x;
    std::vector<int> y;
    make_blobs(40, 1, x, y);
    Rng rng(2);
    const LinearClassifier clf = logreg_train(x, y, 1e-4, 300, 0.5, rng);
    const std::vector<int> pred = logreg_predict(clf, x);
    Index correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (pred[i] == y[i])
            ++correct;
    CHECK(correct == static_cast<Index>(y.size()));
}

TEST_CASE("stronger l2 shrinks the weights") {
    Matrix x;
    std::vector<int> y;
    make_blobs(40, 3, x, y);
    double last_norm = std::numeric_limits<double>::infinity();
    for (const double l2 : {0.01, 0.1, 1.0}) {
        Rng rng(4);
        const LinearClassifier clf = logreg_train(x, y, l2, 400, 0.3, rng);
        const double norm = clf.weights.norm();
        CHECK(norm < last_norm);
        last_norm = norm;
    }
}

TEST_CASE("one sample per class is memorized") {
    Matrix x(3, 2);
    x << 0, 0, 5, 0, 0, 5;
    const std::vector<int> y{2, 4, 9};
    Rng rng(5);
    const LinearClassifier clf = logreg_train(x, y, 0.0, 500, 0.5, rng);
    CHECK(logreg_predict(clf, x) == y);
}

TEST_CASE("logreg rejects degenerate input") {
    Matrix x(4, 2);
    x.setRandom();
    Rng rng(6);
    CHECK_THROWS_AS(logreg_train(x, {1, 1, 1, 1}, 0.0, 10, 0.1, rng), ValidationError);
}

TEST_CASE("logreg gradients match finite differences") {
    const Matrix x = ts::random_normal_matrix(12, 3, 7);
    std::vector<int> y_idx;
    Rng lab(8);
    for (Index i = 0; i < 12; ++i)
        y_idx.push_back(static_cast<int>(lab.uniform_int(0, 2)));

    Matrix w = 0.3 * ts::random_normal_matrix(3, 3, 9);
    Vector b = 0.1 * ts::random_normal_matrix(3, 1, 10).col(0);
    Matrix dw;
    Vector db;
    const double l2 = 0.05;
    logreg_loss_and_grads(x, y_idx, 3, w, b, l2, dw, db);

    const double h = 1e-6;
    for (Index r = 0; r < 3; ++r) {
        for (Index c = 0; c < 3; ++c) {
            Matrix probe = w;
            Matrix tmp_w;
            Vector tmp_b;
            probe(r, c) = w(r, c) + h;
            const double up = logreg_loss_and_grads(x, y_idx, 3, probe, b, l2, tmp_w, tmp_b);
            probe(r, c) = w(r, c) - h;
            const double down = logreg_loss_and_grads(x, y_idx, 3, probe, b, l2, tmp_w, tmp_b);
            const double fd = (up - down) / (2 * h);
            const double denom = std::max({std::abs(fd), std::abs(dw(r, c)), 1e-8});
            CHECK(std::abs(dw(r, c) - fd) / denom <= 1e-5);
        }
    }
}

TEST_CASE("knn") {
    Matrix x;
    std::vector<int> y;
    make_blobs(30, 11, x, y);

    SUBCASE("a training point is its own 1-nn") {
        const std::vector<int> pred = knn_classify(x, y, x.topRows(5), 1);
        for (int i = 0; i < 5; ++i)
            CHECK(pred[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(i)]);
    }
    SUBCASE("well-separated blobs classify perfectly at k = 5") {
        Matrix queries;
        std::vector<int> qy;
        make_blobs(10, 12, queries, qy);
        const std::vector<int> pred = knn_classify(x, y, queries, 5);
        for (std::size_t i = 0; i < qy.size(); ++i)
            CHECK(pred[i] == qy[i]);
    }
    SUBCASE("full-size k with balanced labels applies the tie break") {
        // all training points vote; summed distance decides deterministically
        Matrix train(4, 1);
        train << 0.0, 1.0, 3.0, 4.0;
        const std::vector<int> labels{0, 0, 1, 1};
        Matrix query(1, 1);
        query << 1.9; // closer to the label-0 mass
        CHECK(knn_classify(train, labels, query, 4)[0] == 0);
        query << 2.1;
        CHECK(knn_classify(train, labels, query, 4)[0] == 1);
        query << 2.0; // exactly balanced: smaller label wins
        CHECK(knn_classify(train, labels, query, 4)[0] == 0);
    }
    SUBCASE("k out of range") {
        CHECK_THROWS_AS(knn_classify(x, y, x, 0), ValidationError);
        CHECK_THROWS_AS(knn_classify(x, y, x, x.rows() + 1), ValidationError);
    }
}

TEST_CASE("cross validation") {
    Matrix x;
    std::vector<int> y;
    make_blobs(100, 13, x, y);

    ClassifierSpec spec;
    spec.kind = ClassifierSpec::Kind::knn;
    spec.k = 5;

    SUBCASE("near-zero error on separable data, deterministic reports") {
        Rng rng1(14);
        const CvReport r1 = cross_validate(x, y, 20, 5, 50, spec, rng1);
        CHECK(r1.per_fold_error.size() == 5);
        CHECK(r1.mean_error <= 0.02);
        CHECK(r1.train_size == 20);

        Rng rng2(14);
        const CvReport r2 = cross_validate(x, y, 20, 5, 50, spec, rng2);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(r1.per_fold_error[i] == r2.per_fold_error[i]);
    }
    SUBCASE("single fold degenerates to one split") {
        Rng rng(15);
        const CvReport r = cross_validate(x, y, 20, 1, 50, spec, rng);
        CHECK(r.per_fold_error.size() == 1);
        CHECK(r.std_error == 0.0);
    }
    SUBCASE("insufficient data is rejected") {
        Rng rng(16);
        CHECK_THROWS_AS(cross_validate(x, y, 150, 2, 150, spec, rng), ValidationError);
    }
    SUBCASE("pool variant keeps train and test separate") {
        Matrix test_x;
        std::vector<int> test_y;
        make_blobs(50, 17, test_x, test_y);
        Rng rng(18);
        const CvReport r = cross_validate_pools(x, y, test_x, test_y, 20, 3, 60, spec, rng);
        CHECK(r.per_fold_error.size() == 3);
        CHECK(r.mean_error <= 0.02);
    }
}

TEST_CASE("an always-wrong classifier errs at the class prior") {
    // 10 balanced classes, logreg with zero epochs stays near-uniform; the
    // expected error of an uninformed vote on balanced labels is about 0.9
    Rng data_rng(19);
    Matrix x(500, 3);
    std::vector<int> y(500);
    for (Index i = 0; i < 500; ++i) {
        for (Index j = 0; j < 3; ++j)
            x(i, j) = data_rng.normal();
        y[static_cast<std::size_t>(i)] = static_cast<int>(i % 10);
    }
    ClassifierSpec spec;
    spec.kind = ClassifierSpec::Kind::logreg;
    spec.epochs = 0; // untrained
    Rng rng(20);
    const CvReport r = cross_validate(x, y, 100, 4, 200, spec, rng);
    CHECK(r.mean_error > 0.8);
    CHECK(r.mean_error <= 1.0);
}

TEST_CASE("pca") {
    SUBCASE("full-rank 2-D data projects isometrically") {
        const Matrix x = ts::random_normal_matrix(60, 2, 21);
        const Matrix p = pca_2d(x);
        for (int rep = 0; rep < 20; ++rep) {
            const Index i = rep % 60;
            const Index j = (rep * 7 + 3) % 60;
            const double before = (x.row(i) - x.row(j)).norm();
            const double after = (p.row(i) - p.row(j)).norm();
            CHECK(after == doctest::Approx(before).epsilon(1e-8));
        }
    }
    SUBCASE("collinear data has negligible second variance") {
        const Matrix dir = ts::random_normal_matrix(1, 6, 22);
        const Matrix coef = ts::random_normal_matrix(40, 1, 23);
        const Matrix x = coef * dir;
        const Pca2d p = pca_2d_full(x);
        CHECK(p.variance_2 <= 1e-10);
        CHECK(p.projection.col(1).cwiseAbs().maxCoeff() <= 1e-5);
    }
    SUBCASE("explained variance matches a dense eigensolver") {
        const Matrix x = ts::random_normal_matrix(50, 8, 24);
        const Pca2d p = pca_2d_full(x);

        const Matrix centered = x.rowwise() - x.colwise().mean();
        const Matrix cov = centered.transpose() * centered / 49.0;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
        const Vector evs = solver.eigenvalues(); // ascending
        CHECK(p.variance_1 == doctest::Approx(evs[7]).epsilon(1e-8));
        CHECK(p.variance_2 == doctest::Approx(evs[6]).epsilon(1e-8));
    }
    SUBCASE("component sign is pinned") {
        const Matrix x = ts::random_normal_matrix(30, 5, 25);
        const Pca2d p = pca_2d_full(x);
        Index imax = 0;
        p.component_1.cwiseAbs().maxCoeff(&imax);
        CHECK(p.component_1[imax] > 0.0);
    }
    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(pca_2d(Matrix::Zero(2, 4)), ValidationError);
        CHECK_THROWS_AS(pca_2d(Matrix::Zero(10, 4)), ValidationError);
    }
}

} // TEST_SUITE
