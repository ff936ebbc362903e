#include "omics/fold_plan.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "omics/error.hpp"
#include "omics/rng.hpp"

namespace omics {

std::vector<std::size_t> FoldPlan::train_rows(std::size_t repeat, std::size_t fold) const {
    const auto& test = test_rows(repeat, fold);
    std::vector<std::size_t> out;
    out.reserve(n_samples - test.size());
    for (std::size_t i = 0, t = 0; i < n_samples; ++i) {
        if (t < test.size() && test[t] == i) {
            ++t;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

FoldPlan make_fold_plan(std::size_t n_samples, std::size_t n_folds, std::size_t n_repeats, std::uint64_t seed) {
    if (n_folds < 2) throw InvalidArgument("need at least 2 folds");
    if (n_repeats < 1) throw InvalidArgument("need at least 1 repeat");
    if (n_samples < n_folds)
        throw InvalidArgument(std::to_string(n_samples) + " samples cannot fill " + std::to_string(n_folds) + " folds");
    FoldPlan plan{n_samples, n_folds, n_repeats, seed, {}};
    for (std::size_t r = 0; r < n_repeats; ++r) {
        std::vector<std::size_t> order(n_samples);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(derive_seed(seed, r));
        rng.shuffle(order);
        std::vector<std::vector<std::size_t>> folds(n_folds);
        std::size_t at = 0;
        for (std::size_t f = 0; f < n_folds; ++f) {
            const std::size_t size = n_samples / n_folds + (f < n_samples % n_folds ? 1 : 0);
            folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                            order.begin() + static_cast<std::ptrdiff_t>(at + size));
            std::sort(folds[f].begin(), folds[f].end());
            at += size;
        }
        plan.assignments.push_back(std::move(folds));
    }
    return plan;
}

FoldPlan make_grouped_fold_plan(const std::vector<std::size_t>& group_of_sample, std::size_t n_folds,
                                std::size_t n_repeats, std::uint64_t seed) {
    if (n_folds < 2) throw InvalidArgument("need at least 2 folds");
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < group_of_sample.size(); ++i) groups[group_of_sample[i]].push_back(i);
    if (groups.size() < n_folds) throw InvalidArgument("fewer groups than folds");
    FoldPlan plan{group_of_sample.size(), n_folds, n_repeats, seed, {}};
    for (std::size_t r = 0; r < n_repeats; ++r) {
        std::vector<const std::vector<std::size_t>*> order;
        for (const auto& [g, members] : groups) order.push_back(&members);
        Rng rng(derive_seed(seed, r));
        rng.shuffle(order);
        std::vector<std::vector<std::size_t>> folds(n_folds);
        for (const auto* members : order) {
            auto smallest = std::min_element(folds.begin(), folds.end(),
                                             [](const auto& a, const auto& b) { return a.size() < b.size(); });
            smallest->insert(smallest->end(), members->begin(), members->end());
        }
        for (auto& f : folds) std::sort(f.begin(), f.end());
        plan.assignments.push_back(std::move(folds));
    }
    return plan;
}

}  // namespace omics
