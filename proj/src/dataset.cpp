#include "strata/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace strata {

Dataset::Dataset(std::vector<double> features, std::vector<int> labels, int dim)
    : features_(std::move(features)), labels_(std::move(labels)), dim_(dim) {
    if (dim_ < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
    if (labels_.size() < 2) throw std::invalid_argument("Dataset: need at least 2 points");
    n_ = static_cast<int>(labels_.size());
    if (features_.size() != static_cast<std::size_t>(n_) * dim_)
        throw std::invalid_argument("Dataset: feature/label size mismatch");
    for (int y : labels_)
        if (y != 0 && y != 1)
            throw std::invalid_argument("Dataset: labels must be 0 or 1");
    for (double x : features_)
        if (!std::isfinite(x))
            throw std::invalid_argument("Dataset: non-finite feature value");
}

double Dataset::positive_fraction() const {
    long long pos = std::count(labels_.begin(), labels_.end(), 1);
    return static_cast<double>(pos) / n_;
}

Dataset Dataset::min_max_normalized() const {
    std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
    for (int i = 0; i < n_; ++i) {
        auto r = row(i);
        for (int j = 0; j < dim_; ++j) {
            lo[j] = std::min(lo[j], r[j]);
            hi[j] = std::max(hi[j], r[j]);
        }
    }
    std::vector<double> out(features_.size());
    for (int i = 0; i < n_; ++i) {
        auto r = row(i);
        for (int j = 0; j < dim_; ++j) {
            double range = hi[j] - lo[j];
            out[static_cast<std::size_t>(i) * dim_ + j] =
                range > 0.0 ? (r[j] - lo[j]) / range : 0.5;
        }
    }
    return Dataset(std::move(out), labels_, dim_);
}

bool Dataset::is_normalized() const {
    return std::all_of(features_.begin(), features_.end(),
                       [](double x) { return x >= 0.0 && x <= 1.0; });
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

Dataset Dataset::load_csv(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::vector<double> features;
    std::vector<int> labels;
    int dim = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (header && lineno == 1) continue;
        // tolerate trailing \r and blank lines
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;

        auto fields = split_csv_line(line);
        if (fields.size() < 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": need at least one feature and a label");
        if (dim < 0) dim = static_cast<int>(fields.size()) - 1;
        if (static_cast<int>(fields.size()) - 1 != dim)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": inconsistent column count");
        try {
            for (int j = 0; j < dim; ++j) features.push_back(std::stod(fields[j]));
            int y = std::stoi(fields[static_cast<std::size_t>(dim)]);
            if (y != 0 && y != 1) throw std::invalid_argument("label");
            labels.push_back(y);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed row (features then {0,1} label)");
        }
    }
    if (labels.empty()) throw std::runtime_error(path + ": no data rows");
    return Dataset(std::move(features), std::move(labels), dim);
}

void Dataset::save_csv(const std::string& path, bool header) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out.precision(17);
    if (header) {
        for (int j = 0; j < dim_; ++j) out << "x" << j << ",";
        out << "label\n";
    }
    for (int i = 0; i < n_; ++i) {
        auto r = row(i);
        for (int j = 0; j < dim_; ++j) out << r[j] << ",";
        out << labels_[static_cast<std::size_t>(i)] << "\n";
    }
}

}  // namespace strata
