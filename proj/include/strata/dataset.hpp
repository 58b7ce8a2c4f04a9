#pragma once

#include <span>
#include <string>
#include <vector>

namespace strata {

// Labeled binary-classification dataset; doubles as the player set N.
// Feature rows are stored contiguously (row-major), labels in {0, 1}.
// Immutable after construction; n >= 2 and all rows share one dimension.
class Dataset {
public:
    Dataset(std::vector<double> features, std::vector<int> labels, int dim);

    int n() const { return n_; }
    int dim() const { return dim_; }

    std::span<const double> row(int i) const {
        return {features_.data() + static_cast<std::size_t>(i) * dim_,
                static_cast<std::size_t>(dim_)};
    }
    int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& labels() const { return labels_; }

    // Fraction of points with label 1.
    double positive_fraction() const;

    // Per-feature min-max rescaling onto [0,1]. Constant features map to 0.5.
    Dataset min_max_normalized() const;
    bool is_normalized() const;  // all feature components in [0,1]

    // CSV: one row per point, feature columns then a final {0,1} label column.
    static Dataset load_csv(const std::string& path, bool header = false);
    void save_csv(const std::string& path, bool header = false) const;

private:
    std::vector<double> features_;
    std::vector<int> labels_;
    int n_ = 0;
    int dim_ = 0;
};

}  // namespace strata
