#include <random>

#include <benchmark/benchmark.h>

#include "omics/extraction.hpp"
#include "omics/filters.hpp"
#include "omics/lasso.hpp"
#include "omics/standardizer.hpp"
#include "omics/svr.hpp"
#include "omics/texture.hpp"

namespace {

Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index p, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = nd(gen);
    return X;
}

omics::Volume3D cube(std::size_t n, unsigned seed) {
    omics::Grid g;
    g.dims = {n, n, n};
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(gen);
    return omics::Volume3D(g, std::move(v));
}

void BM_LassoKNonzero(benchmark::State& state) {
    const Eigen::Index p = state.range(0);
    const Eigen::MatrixXd X = omics::Standardizer::fit(gaussian(55, p, 1)).apply(gaussian(55, p, 1));
    Eigen::VectorXd y = X.leftCols(5).rowwise().sum() + gaussian(55, 1, 2).col(0);
    y.array() -= y.mean();
    for (auto _ : state) benchmark::DoNotOptimize(omics::lasso_k_nonzero(X, y, 20));
}
BENCHMARK(BM_LassoKNonzero)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SvrTrain(benchmark::State& state) {
    const Eigen::MatrixXd X = gaussian(state.range(0), 10, 3);
    const Eigen::VectorXd y = X.col(0).array().sin().matrix() + 0.1 * gaussian(state.range(0), 1, 4).col(0);
    omics::SVRHyperparams hp;
    hp.C = 10.0;
    hp.kernel = state.range(1) ? omics::KernelSpec::rbf(0.1) : omics::KernelSpec::linear();
    for (auto _ : state) benchmark::DoNotOptimize(omics::svr_train(X, y, hp));
}
BENCHMARK(BM_SvrTrain)->Args({55, 0})->Args({55, 1})->Args({200, 0})->Args({200, 1})->Unit(benchmark::kMillisecond);

void BM_Glcm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const omics::Volume3D v = cube(n, 5);
    const omics::Mask3D m(v.grid(), std::vector<std::uint8_t>(v.size(), 1));
    const omics::LabelVolume lv = omics::discretize(v, m, 32);
    for (auto _ : state) {
        const auto t = omics::texture_matrix(omics::TextureKind::glcm, lv);
        benchmark::DoNotOptimize(omics::texture_features(t));
    }
}
BENCHMARK(BM_Glcm)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Haar(benchmark::State& state) {
    const omics::Volume3D v = cube(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state) benchmark::DoNotOptimize(omics::haar_decompose(v));
}
BENCHMARK(BM_Haar)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_ExtractLesion(benchmark::State& state) {
    const omics::Volume3D v = cube(16, 7);
    std::vector<std::uint8_t> occ(v.size(), 0);
    for (std::size_t z = 4; z < 12; ++z)
        for (std::size_t y = 4; y < 12; ++y)
            for (std::size_t x = 4; x < 12; ++x) occ[v.grid().offset(x, y, z)] = 1;
    const omics::Mask3D m(v.grid(), occ);
    const omics::ExtractionConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(omics::extract_features(v, m, cfg));
}
BENCHMARK(BM_ExtractLesion)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
