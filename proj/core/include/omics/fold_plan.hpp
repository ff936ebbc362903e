#pragma once

#include <cstdint>
#include <vector>

namespace omics {

/// Repeated k-fold partition of sample indices. Each repeat shuffles the
/// samples and cuts them into n_folds contiguous chunks; the first
/// n_samples % n_folds folds get one extra sample.
struct FoldPlan {
    std::size_t n_samples = 0;
    std::size_t n_folds = 5;
    std::size_t n_repeats = 10;
    std::uint64_t seed = 0;
    /// assignments[repeat][fold] = sorted sample indices of the held-out fold.
    std::vector<std::vector<std::vector<std::size_t>>> assignments;

    std::size_t n_iterations() const noexcept { return n_folds * n_repeats; }
    const std::vector<std::size_t>& test_rows(std::size_t repeat, std::size_t fold) const {
        return assignments.at(repeat).at(fold);
    }
    /// Complement of the held-out fold, ascending.
    std::vector<std::size_t> train_rows(std::size_t repeat, std::size_t fold) const;
};

/// Pure function of its arguments. Requires n_folds >= 2 and n_samples >= n_folds.
FoldPlan make_fold_plan(std::size_t n_samples, std::size_t n_folds, std::size_t n_repeats, std::uint64_t seed);

/// Plan whose folds keep every group (e.g. all lesions of one patient) together.
/// Groups are shuffled and dealt greedily to the currently smallest fold.
FoldPlan make_grouped_fold_plan(const std::vector<std::size_t>& group_of_sample, std::size_t n_folds,
                                std::size_t n_repeats, std::uint64_t seed);

}  // namespace omics
