#include "gph/mixture.hpp"

#include <cmath>

namespace gph {

ProductMixture::ProductMixture(std::vector<Component> components)
    : components_(std::move(components)) {
    if (components_.empty())
        throw std::invalid_argument("ProductMixture: at least one component");
    for (const auto& c : components_) {
        if (!(c.weight > 0.0))
            throw std::invalid_argument(
                "ProductMixture: weights must be positive");
        if (c.field.grid() != components_.front().field.grid())
            throw std::invalid_argument(
                "ProductMixture: components must share one grid");
    }
}

ProductMixture::ProductMixture(double weight, Field field) {
    components_.push_back({weight, std::move(field)});
    if (!(weight > 0.0))
        throw std::invalid_argument("ProductMixture: weights must be positive");
}

DenseKernel materialize(const ProductMixture& mix, int order) {
    DenseKernel out(order, mix.grid());
    for (const auto& c : mix.components()) {
        DenseKernel piece = factorized_kernel(c.field, order);
        piece *= cplx(c.weight, 0.0);
        out += piece;
    }
    return out;
}

double admissibility_defect(const ProductMixture& mix, int k) {
    if (k < 1) throw std::invalid_argument("admissibility_defect: k >= 1");
    // partial_trace(gamma^{k+1}) - gamma^{k}
    //   = sum_r w_r (|phi_r|_2^2 - 1) * (factorized kernel of phi_r at k),
    // whose L2 norm has the Gram closed form below.
    const auto& comps = mix.components();
    std::vector<double> excess(comps.size());
    for (std::size_t r = 0; r < comps.size(); ++r)
        excess[r] = l2_norm_sq(comps[r].field) - 1.0;
    double acc = 0.0;
    for (std::size_t a = 0; a < comps.size(); ++a)
        for (std::size_t b = 0; b < comps.size(); ++b) {
            const double overlap =
                std::abs(quadrature_inner(comps[a].field, comps[b].field));
            acc += comps[a].weight * comps[b].weight * excess[a] * excess[b] *
                   std::pow(overlap, 2.0 * k);
        }
    return std::sqrt(std::max(0.0, acc));
}

double admissibility_defect(const DenseKernel& level_k,
                            const DenseKernel& level_k_plus_1) {
    if (level_k_plus_1.order() != level_k.order() + 1)
        throw std::invalid_argument(
            "admissibility_defect: levels must be adjacent orders");
    DenseKernel traced = partial_trace(level_k_plus_1);
    traced -= level_k;
    return kernel_l2_norm(traced);
}

void HierarchyTruncation::validate() const {
    if (levels.empty())
        throw std::invalid_argument("HierarchyTruncation: K >= 1 required");
    for (int i = 0; i < int(levels.size()); ++i) {
        if (levels[i].order() != i + 1)
            throw std::invalid_argument(
                "HierarchyTruncation: level " + std::to_string(i + 1) +
                " has order " + std::to_string(levels[i].order()));
        if (levels[i].grid() != levels.front().grid())
            throw std::invalid_argument(
                "HierarchyTruncation: levels must share one grid");
    }
    if (closure.kind == ClosurePolicy::Kind::mixture_reference) {
        if (!closure.reference)
            throw std::invalid_argument(
                "HierarchyTruncation: mixture_reference closure needs a mixture");
        if (closure.reference->grid() != levels.front().grid())
            throw std::invalid_argument(
                "HierarchyTruncation: closure must share the levels' grid");
    }
}

}  // namespace gph
