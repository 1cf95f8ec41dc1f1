#include "cae/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cae/error.hpp"

namespace cae {

namespace {

// Sorted distinct labels and each sample's class index.
std::pair<std::vector<int>, std::vector<int>> index_labels(const std::vector<int>& y) {
    std::vector<int> classes(y);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::vector<int> idx(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        idx[i] = static_cast<int>(
            std::lower_bound(classes.begin(), classes.end(), y[i]) - classes.begin());
    return {std::move(classes), std::move(idx)};
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p = logits;
    for (Index i = 0; i < p.rows(); ++i) {
        const double m = p.row(i).maxCoeff();
        p.row(i) = (p.row(i).array() - m).exp();
        p.row(i) /= p.row(i).sum();
    }
    return p;
}

} // namespace

double logreg_loss_and_grads(const Matrix& x, const std::vector<int>& y_idx, Index n_classes,
                             const Matrix& weights, const Vector& bias, double l2,
                             Matrix& d_weights, Vector& d_bias) {
    const Index b = x.rows();
    Matrix logits = x * weights.transpose();
    logits.rowwise() += bias.transpose();
    const Matrix probs = softmax_rows(logits);

    double loss = 0.0;
    Matrix delta = probs; // P - Y
    for (Index i = 0; i < b; ++i) {
        const int c = y_idx[static_cast<std::size_t>(i)];
        loss -= std::log(std::max(probs(i, c), 1e-300));
        delta(i, c) -= 1.0;
    }
    loss /= static_cast<double>(b);
    loss += 0.5 * l2 * weights.squaredNorm();

    d_weights = (delta.transpose() * x) / static_cast<double>(b) + l2 * weights;
    d_bias = delta.colwise().mean().transpose();
    (void)n_classes;
    return loss;
}

LinearClassifier logreg_train(const Matrix& x, const std::vector<int>& y, double l2,
                              Index epochs, double lr, Rng& rng) {
    if (x.rows() != static_cast<Index>(y.size()))
        throw ShapeError("feature rows and label count differ");
    auto [classes, y_idx] = index_labels(y);
    if (classes.size() < 2)
        throw ValidationError("need at least two classes to train a classifier");
    const Index c = static_cast<Index>(classes.size());
    if (x.rows() < c)
        throw ValidationError("need at least as many samples as classes");

    LinearClassifier clf;
    clf.classes = classes;
    clf.weights.resize(c, x.cols());
    for (Index i = 0; i < c; ++i)
        for (Index j = 0; j < x.cols(); ++j)
            clf.weights(i, j) = 0.01 * rng.normal();
    clf.bias = Vector::Zero(c);

    Matrix d_w;
    Vector d_b;
    for (Index epoch = 0; epoch < epochs; ++epoch) {
        logreg_loss_and_grads(x, y_idx, c, clf.weights, clf.bias, l2, d_w, d_b);
        clf.weights -= lr * d_w;
        clf.bias -= lr * d_b;
    }
    return clf;
}

std::vector<int> logreg_predict(const LinearClassifier& clf, const Matrix& x) {
    if (x.cols() != clf.weights.cols())
        throw ShapeError("feature width does not match the classifier");
    Matrix logits = x * clf.weights.transpose();
    logits.rowwise() += clf.bias.transpose();
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        logits.row(i).maxCoeff(&best);
        out[static_cast<std::size_t>(i)] = clf.classes[static_cast<std::size_t>(best)];
    }
    return out;
}

std::vector<int> knn_classify(const Matrix& train_x, const std::vector<int>& train_y,
                              const Matrix& query_x, Index k) {
    if (train_x.rows() != static_cast<Index>(train_y.size()))
        throw ShapeError("feature rows and label count differ");
    if (k < 1 || k > train_x.rows())
        throw ValidationError("k must lie in [1, train size]");
    if (query_x.cols() != train_x.cols())
        throw ShapeError("query width does not match the training data");

    std::vector<int> out(static_cast<std::size_t>(query_x.rows()));
    std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(train_x.rows()));
    for (Index q = 0; q < query_x.rows(); ++q) {
        for (Index t = 0; t < train_x.rows(); ++t)
            order[static_cast<std::size_t>(t)] = {(train_x.row(t) - query_x.row(q)).norm(), t};
        std::partial_sort(order.begin(), order.begin() + k, order.end());

        std::map<int, std::pair<Index, double>> votes; // label -> (count, summed distance)
        for (Index n = 0; n < k; ++n) {
            const auto& [d, idx] = order[static_cast<std::size_t>(n)];
            auto& v = votes[train_y[static_cast<std::size_t>(idx)]];
            v.first += 1;
            v.second += d;
        }
        int best_label = votes.begin()->first;
        std::pair<Index, double> best = votes.begin()->second;
        for (const auto& [label, v] : votes) {
            const bool wins = v.first > best.first ||
                              (v.first == best.first && v.second < best.second) ||
                              (v.first == best.first && v.second == best.second &&
                               label < best_label);
            if (wins) {
                best_label = label;
                best = v;
            }
        }
        out[static_cast<std::size_t>(q)] = best_label;
    }
    return out;
}

namespace {

// Indices per class, each shuffled; used for balanced sampling.
std::map<int, std::vector<Index>> shuffled_class_indices(const std::vector<int>& y, Rng& rng) {
    std::map<int, std::vector<Index>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i)
        by_class[y[i]].push_back(static_cast<Index>(i));
    for (auto& [label, idx] : by_class) {
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.uniform_int(
                                      0, static_cast<long>(i) - 1))]);
    }
    return by_class;
}

std::vector<int> run_classifier(const ClassifierSpec& spec, const Matrix& train_x,
                                const std::vector<int>& train_y, const Matrix& test_x,
                                Rng& rng) {
    if (spec.kind == ClassifierSpec::Kind::logreg) {
        const LinearClassifier clf =
            logreg_train(train_x, train_y, spec.l2, spec.epochs, spec.lr, rng);
        return logreg_predict(clf, test_x);
    }
    return knn_classify(train_x, train_y, test_x, spec.k);
}

CvReport run_folds(const Matrix& pool_x, const std::vector<int>& pool_y,
                   const Matrix* test_pool_x, const std::vector<int>* test_pool_y,
                   Index train_size, Index folds, Index test_size, const ClassifierSpec& spec,
                   Rng& rng) {
    if (folds < 1)
        throw ValidationError("need at least one fold");

    CvReport report;
    report.train_size = train_size;
    for (Index fold = 0; fold < folds; ++fold) {
        Rng fold_rng(rng.split());

        auto by_class = shuffled_class_indices(pool_y, fold_rng);
        const Index n_classes = static_cast<Index>(by_class.size());
        if (n_classes < 2)
            throw ValidationError("need at least two classes");

        // per-class quota, remainder spread over the smallest labels
        const Index base = train_size / n_classes;
        Index rem = train_size % n_classes;
        std::vector<Index> train_idx;
        std::vector<bool> used(pool_y.size(), false);
        for (auto& [label, idx] : by_class) {
            const Index want = base + (rem > 0 ? 1 : 0);
            if (rem > 0)
                --rem;
            if (static_cast<Index>(idx.size()) < want)
                throw ValidationError("class " + std::to_string(label) +
                                      " has too few samples for a balanced train set");
            for (Index i = 0; i < want; ++i) {
                train_idx.push_back(idx[static_cast<std::size_t>(i)]);
                used[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = true;
            }
        }

        std::vector<Index> test_idx;
        if (test_pool_x) {
            // disjoint by construction; sample test_size rows from the test pool
            std::vector<Index> all(test_pool_y->size());
            std::iota(all.begin(), all.end(), 0);
            for (std::size_t i = all.size(); i > 1; --i)
                std::swap(all[i - 1], all[static_cast<std::size_t>(fold_rng.uniform_int(
                                          0, static_cast<long>(i) - 1))]);
            if (static_cast<Index>(all.size()) < test_size)
                throw ValidationError("test pool smaller than test_size");
            test_idx.assign(all.begin(), all.begin() + test_size);
        } else {
            std::vector<Index> rest;
            for (std::size_t i = 0; i < used.size(); ++i)
                if (!used[i])
                    rest.push_back(static_cast<Index>(i));
            if (static_cast<Index>(rest.size()) < test_size)
                throw ValidationError("not enough samples left for the test set");
            for (std::size_t i = rest.size(); i > 1; --i)
                std::swap(rest[i - 1], rest[static_cast<std::size_t>(fold_rng.uniform_int(
                                           0, static_cast<long>(i) - 1))]);
            test_idx.assign(rest.begin(), rest.begin() + test_size);
        }

        Matrix train_x(static_cast<Index>(train_idx.size()), pool_x.cols());
        std::vector<int> train_y(train_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            train_x.row(static_cast<Index>(i)) = pool_x.row(train_idx[i]);
            train_y[i] = pool_y[static_cast<std::size_t>(train_idx[i])];
        }
        const Matrix& src_x = test_pool_x ? *test_pool_x : pool_x;
        const std::vector<int>& src_y = test_pool_y ? *test_pool_y : pool_y;
        Matrix test_x(static_cast<Index>(test_idx.size()), src_x.cols());
        std::vector<int> test_y(test_idx.size());
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            test_x.row(static_cast<Index>(i)) = src_x.row(test_idx[i]);
            test_y[i] = src_y[static_cast<std::size_t>(test_idx[i])];
        }

        const std::vector<int> pred = run_classifier(spec, train_x, train_y, test_x, fold_rng);
        Index wrong = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] != test_y[i])
                ++wrong;
        report.per_fold_error.push_back(static_cast<double>(wrong) /
                                        static_cast<double>(pred.size()));
    }

    const double n = static_cast<double>(report.per_fold_error.size());
    report.mean_error =
        std::accumulate(report.per_fold_error.begin(), report.per_fold_error.end(), 0.0) / n;
    double var = 0.0;
    for (double e : report.per_fold_error)
        var += (e - report.mean_error) * (e - report.mean_error);
    report.std_error = std::sqrt(var / n);
    return report;
}

} // namespace

CvReport cross_validate(const Matrix& x, const std::vector<int>& y, Index train_size,
                        Index folds, Index test_size, const ClassifierSpec& spec, Rng& rng) {
    if (x.rows() != static_cast<Index>(y.size()))
        throw ShapeError("feature rows and label count differ");
    return run_folds(x, y, nullptr, nullptr, train_size, folds, test_size, spec, rng);
}

CvReport cross_validate_pools(const Matrix& train_x, const std::vector<int>& train_y,
                              const Matrix& test_x, const std::vector<int>& test_y,
                              Index train_size, Index folds, Index test_size,
                              const ClassifierSpec& spec, Rng& rng) {
    if (train_x.rows() != static_cast<Index>(train_y.size()) ||
        test_x.rows() != static_cast<Index>(test_y.size()))
        throw ShapeError("feature rows and label count differ");
    if (train_x.cols() != test_x.cols())
        throw ShapeError("train and test pools have different widths");
    return run_folds(train_x, train_y, &test_x, &test_y, train_size, folds, test_size, spec,
                     rng);
}

namespace {

// Leading eigenvector of the symmetric matrix c by power iteration; v0 is the
// deterministic start, re-orthogonalized against `against` when given.
std::pair<Vector, double> power_iterate(const Matrix& c, const Vector* against) {
    const Index m = c.rows();
    Vector v(m);
    for (Index i = 0; i < m; ++i)
        v[i] = std::sin(static_cast<double>(i) + 1.0) + 0.5;
    // Gram-Schmidt applied twice: a single pass leaves a residual that the
    // dominant eigenvalue re-amplifies faster than the deflated subspace grows
    const auto deflate = [&](Vector& u) {
        u -= against->dot(u) * (*against);
        u -= against->dot(u) * (*against);
    };
    if (against)
        deflate(v);
    v.normalize();

    double eigen = 0.0;
    for (int iter = 0; iter < 5000; ++iter) {
        Vector next = c * v;
        if (against)
            deflate(next);
        const double norm = next.norm();
        if (norm < 1e-300) {
            // flat spectrum in the remaining subspace: any unit vector works
            eigen = 0.0;
            break;
        }
        next /= norm;
        if (next.dot(v) < 0.0)
            next = -next; // fix the per-iteration sign flip for negative shifts
        const double delta = (next - v).norm();
        v = next;
        eigen = v.dot(c * v);
        if (delta < 1e-10)
            break;
    }
    return {v, eigen};
}

} // namespace

Pca2d pca_2d_full(const Matrix& x) {
    if (x.rows() < 3)
        throw ValidationError("need at least 3 samples for a 2-D PCA");
    const Matrix centered = x.rowwise() - x.colwise().mean();
    const double total_var = centered.squaredNorm();
    if (total_var < 1e-24)
        throw ValidationError("data has zero variance (rank 0)");

    const Matrix cov =
        centered.transpose() * centered / static_cast<double>(x.rows() - 1);

    Pca2d out;
    auto [v1, e1] = power_iterate(cov, nullptr);
    auto [v2, e2] = power_iterate(cov, &v1);

    const auto fix_sign = [](Vector& v) {
        Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0.0)
            v = -v;
    };
    fix_sign(v1);
    fix_sign(v2);

    out.component_1 = v1;
    out.component_2 = v2;
    out.variance_1 = e1;
    out.variance_2 = e2;
    out.projection.resize(x.rows(), 2);
    out.projection.col(0) = centered * v1;
    out.projection.col(1) = centered * v2;
    return out;
}

Matrix pca_2d(const Matrix& x) {
    return pca_2d_full(x).projection;
}

} // namespace cae
