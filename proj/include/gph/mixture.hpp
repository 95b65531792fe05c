#pragma once

#include <optional>
#include <vector>

#include "gph/dense_kernel.hpp"
#include "gph/field.hpp"

namespace gph {

// Positive combination of factorized pure states: for every k the induced
// kernel is sum_r w_r prod_j phi_r(x_j) conj(phi_r(x'_j)). Components with
// non-unit norm realize non-admissible states.
class ProductMixture {
public:
    struct Component {
        double weight;
        Field field;
    };

    explicit ProductMixture(std::vector<Component> components);
    ProductMixture(double weight, Field field);

    const std::vector<Component>& components() const { return components_; }
    std::vector<Component>& components() { return components_; }
    std::size_t count() const { return components_.size(); }
    const Grid& grid() const { return components_.front().field.grid(); }

private:
    std::vector<Component> components_;
};

// Dense materialization of the induced order-k kernel.
DenseKernel materialize(const ProductMixture& mix, int order);

// || partial_trace(gamma^{k+1}) - gamma^{k} ||_{L2}; zero iff the state is
// admissible at level k. Closed form, no dense tensors.
double admissibility_defect(const ProductMixture& mix, int k);

// Dense-path variant for explicitly stored levels.
double admissibility_defect(const DenseKernel& level_k,
                            const DenseKernel& level_k_plus_1);

// Closure for a finite stack of dense levels: either the missing upper
// levels are taken as zero, or they are read off a product mixture evolved
// alongside.
struct ClosurePolicy {
    enum class Kind { zero, mixture_reference };
    Kind kind = Kind::zero;
    std::optional<ProductMixture> reference;
};

// Dense levels 1..K plus the closure that supplies what feeds level K.
struct HierarchyTruncation {
    std::vector<DenseKernel> levels;  // levels[i] has order i+1
    ClosurePolicy closure;

    int depth() const { return int(levels.size()); }
    const DenseKernel& level(int k) const { return levels.at(k - 1); }
    void validate() const;
};

}  // namespace gph
