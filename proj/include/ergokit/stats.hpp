#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ergokit/errors.hpp"

namespace ergokit {

enum class EstimateMethod { mcmc, quadrature, exact };

inline const char* method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::mcmc: return "mcmc";
        case EstimateMethod::quadrature: return "quadrature";
        case EstimateMethod::exact: return "exact";
    }
    return "?";
}

// Scalar result with a standard error and sample metadata.
struct EstimateWithError {
    double mean = 0.0;
    double stderr_ = 0.0;
    double n_effective = 0.0;
    EstimateMethod method = EstimateMethod::mcmc;
};

inline bool agree_within(const EstimateWithError& a, const EstimateWithError& b, double n_sigma) {
    const double s = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    return std::abs(a.mean - b.mean) <= n_sigma * s;
}

inline double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double variance_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

// Batch-means estimate for a (possibly autocorrelated) series.
// n_effective = sample_variance / stderr^2, i.e. the equivalent iid count.
inline EstimateWithError batch_means(const std::vector<double>& xs,
                                     EstimateMethod method = EstimateMethod::mcmc) {
    EstimateWithError e;
    e.method = method;
    const std::size_t n = xs.size();
    if (n == 0) throw validation_error("batch_means: empty series");
    e.mean = mean_of(xs);
    if (n < 4) {
        e.stderr_ = std::sqrt(variance_of(xs) / static_cast<double>(n));
        e.n_effective = static_cast<double>(n);
        return e;
    }
    std::size_t n_batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    if (n_batches < 2) n_batches = 2;
    const std::size_t bsz = n / n_batches;
    std::vector<double> bm(n_batches, 0.0);
    for (std::size_t b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * bsz; i < (b + 1) * bsz; ++i) s += xs[i];
        bm[b] = s / static_cast<double>(bsz);
    }
    const double vb = variance_of(bm);
    e.stderr_ = std::sqrt(vb / static_cast<double>(n_batches));
    const double v = variance_of(xs);
    e.n_effective = (e.stderr_ > 0.0) ? v / (e.stderr_ * e.stderr_)
                                      : static_cast<double>(n);
    return e;
}

// Histogram of a 1-d sample against a reference density.
struct HistogramReport {
    std::vector<double> bin_edges;         // nbins + 1
    std::vector<std::size_t> counts;       // nbins
    std::vector<double> reference_density; // nbins, evaluated at bin centers
    double sup_discrepancy = 0.0;          // max |empirical density - reference|
    std::size_t n_total = 0;
    std::size_t n_in_range = 0;
};

template <typename Density>
HistogramReport make_histogram(const std::vector<double>& samples, double lo, double hi,
                               std::size_t nbins, Density&& reference) {
    if (!(hi > lo) || nbins == 0) throw validation_error("make_histogram: bad range");
    HistogramReport r;
    r.n_total = samples.size();
    r.bin_edges.resize(nbins + 1);
    const double w = (hi - lo) / static_cast<double>(nbins);
    for (std::size_t i = 0; i <= nbins; ++i) r.bin_edges[i] = lo + w * static_cast<double>(i);
    r.counts.assign(nbins, 0);
    for (double x : samples) {
        if (x < lo || x >= hi) continue;
        auto b = static_cast<std::size_t>((x - lo) / w);
        if (b >= nbins) b = nbins - 1;
        ++r.counts[b];
        ++r.n_in_range;
    }
    r.reference_density.resize(nbins);
    const double n = static_cast<double>(r.n_total);
    for (std::size_t b = 0; b < nbins; ++b) {
        const double c = lo + (static_cast<double>(b) + 0.5) * w;
        r.reference_density[b] = reference(c);
        const double emp = static_cast<double>(r.counts[b]) / (n * w);
        r.sup_discrepancy = std::max(r.sup_discrepancy, std::abs(emp - r.reference_density[b]));
    }
    return r;
}

} // namespace ergokit
