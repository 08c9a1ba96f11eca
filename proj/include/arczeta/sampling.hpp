#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <optional>
#include <thread>
#include <vector>

#include "arczeta/polynomial.hpp"
#include "arczeta/rng.hpp"

namespace arczeta {

enum class SamplerKind { pseudo_random, low_discrepancy };

/// Ball restriction of the Gaussian weight, for localized pole detection.
struct SampleRegion {
    ComplexPoint center;
    double radius = 1.0;
};

/// Deterministic sampling plan. Identical plans give bit-identical outputs
/// regardless of thread count.
struct SamplePlan {
    std::uint64_t nsamples = 1'000'000;
    std::uint64_t seed = 1;
    SamplerKind sampler = SamplerKind::pseudo_random;
    std::optional<SampleRegion> region;

    SamplePlan with_seed(std::uint64_t s) const {
        SamplePlan p = *this;
        p.seed = s;
        return p;
    }
};

/// Empirical distribution of |f| under the (possibly region-restricted)
/// Gaussian. Weights are uniform 1/n_kept over the stored values; in region
/// mode the values are the accepted draws and n_kept is the effective sample
/// size.
struct EmpiricalCDF {
    std::vector<double> sorted_values;
    std::uint64_t n_drawn = 0;
    std::uint64_t n_kept = 0;

    double weight_each() const { return n_kept ? 1.0 / static_cast<double>(n_kept) : 0.0; }

    /// F(t) = fraction of mass with |f| <= t.
    double cdf_at(double t) const {
        auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), t);
        return static_cast<double>(it - sorted_values.begin()) / static_cast<double>(n_kept);
    }

    /// Smallest value v with F(v) >= q.
    double quantile(double q) const {
        if (sorted_values.empty()) throw Error("quantile of an empty CDF");
        if (!(q > 0.0 && q <= 1.0)) throw Error("quantile level must be in (0,1]");
        std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n_kept)));
        rank = std::min(std::max<std::size_t>(rank, 1), sorted_values.size());
        return sorted_values[rank - 1];
    }
};

namespace detail {

inline constexpr std::uint64_t kChunkSize = 1u << 20;
inline constexpr double kSigmaPerReal = 0.70710678118654752440;  // N(0, 1/2) per real part

/// Run fn(chunk_id, begin_index, end_index) over the sample index space,
/// possibly on several threads. Chunk boundaries are fixed by kChunkSize, so
/// per-chunk results are independent of the thread count.
template <typename Fn>
inline void run_chunks(std::uint64_t nsamples, Fn&& fn) {
    std::uint64_t nchunks = (nsamples + kChunkSize - 1) / kChunkSize;
    unsigned hw = std::thread::hardware_concurrency();
    unsigned nthreads = static_cast<unsigned>(std::min<std::uint64_t>(hw ? hw : 1, nchunks));
    if (nthreads <= 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c)
            fn(c, c * kChunkSize, std::min(nsamples, (c + 1) * kChunkSize));
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            fn(c, c * kChunkSize, std::min(nsamples, (c + 1) * kChunkSize));
        }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

/// Deterministic pairwise reduction of per-chunk partial sums.
inline double pairwise_total(std::vector<double> v) {
    if (v.empty()) return 0.0;
    while (v.size() > 1) {
        std::vector<double> merged;
        merged.reserve((v.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) merged.push_back(v[i] + v[i + 1]);
        if (v.size() % 2) merged.push_back(v.back());
        v = std::move(merged);
    }
    return v[0];
}

/// Per-chunk Gaussian point generator shared by both samplers.
class GaussianPointStream {
public:
    GaussianPointStream(std::size_t nvars, const SamplePlan& plan, std::uint64_t start_index)
        : nvars_(nvars), plan_(plan), index_(start_index) {
        if (plan.sampler == SamplerKind::low_discrepancy) {
            sobol_.emplace(2 * nvars);
            stream_ = sobol_->stream(start_index);
            dim_seeds_.resize(2 * nvars);
            for (std::size_t d = 0; d < 2 * nvars; ++d)
                dim_seeds_[d] = static_cast<std::uint32_t>(
                    rng::counter_bits(plan.seed, 0xD1CE5EEDULL, d) >> 32);
        }
    }

    /// Fill x[0..nvars) for the current index, then advance.
    void next(std::complex<double>* x) {
        if (sobol_) {
            for (std::size_t v = 0; v < nvars_; ++v) {
                double u0 = rng::unit_from_bits32(
                    rng::owen_scramble(stream_->x[2 * v], dim_seeds_[2 * v]));
                double u1 = rng::unit_from_bits32(
                    rng::owen_scramble(stream_->x[2 * v + 1], dim_seeds_[2 * v + 1]));
                x[v] = {rng::inverse_normal_cdf(u0) * kSigmaPerReal,
                        rng::inverse_normal_cdf(u1) * kSigmaPerReal};
            }
            stream_->advance();
        } else {
            for (std::size_t v = 0; v < nvars_; ++v) {
                double u0 = rng::counter_uniform(plan_.seed, 2 * v, index_);
                double u1 = rng::counter_uniform(plan_.seed, 2 * v + 1, index_);
                x[v] = {rng::inverse_normal_cdf(u0) * kSigmaPerReal,
                        rng::inverse_normal_cdf(u1) * kSigmaPerReal};
            }
        }
        ++index_;
    }

private:
    std::size_t nvars_;
    SamplePlan plan_;
    std::uint64_t index_;
    std::optional<rng::Sobol> sobol_;
    std::optional<rng::Sobol::Stream> stream_;
    std::vector<std::uint32_t> dim_seeds_;
};

inline bool in_region(const std::complex<double>* x, std::size_t nvars, const SampleRegion& r) {
    double d2 = 0.0;
    for (std::size_t v = 0; v < nvars; ++v) {
        std::complex<double> delta = x[v] - r.center.coordinates[v];
        d2 += std::norm(delta);
    }
    return d2 <= r.radius * r.radius;
}

}  // namespace detail

/// Draw |f(x_j)| under the standard complex Gaussian (density pi^-n e^{-|x|^2})
/// and return the sorted empirical CDF. Region mode keeps only draws inside
/// the ball and renormalizes; the effective sample size must stay >= 100.
inline EmpiricalCDF sample_abs_f(const Polynomial& f, const SamplePlan& plan) {
    if (f.is_constant()) throw Error("sample_abs_f: constant polynomial");
    if (plan.nsamples < 10'000) throw Error("sample_abs_f: nsamples must be >= 1e4");
    if (plan.region) {
        if (plan.region->center.size() != f.nvars())
            throw Error("sample_abs_f: region center dimension mismatch");
        if (!(plan.region->radius > 0.0)) throw Error("sample_abs_f: region radius must be > 0");
    }
    std::size_t nvars = f.nvars();
    std::uint64_t nchunks = (plan.nsamples + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<std::vector<double>> buckets(nchunks);

    detail::run_chunks(plan.nsamples, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
        PolynomialEvaluator eval(f);
        detail::GaussianPointStream gen(nvars, plan, b);
        std::vector<std::complex<double>> x(nvars);
        auto& out = buckets[chunk];
        out.reserve(static_cast<std::size_t>(e - b));
        for (std::uint64_t i = b; i < e; ++i) {
            gen.next(x.data());
            if (plan.region && !detail::in_region(x.data(), nvars, *plan.region)) continue;
            out.push_back(std::abs(eval(x.data())));
        }
    });

    EmpiricalCDF cdf;
    cdf.n_drawn = plan.nsamples;
    std::size_t total = 0;
    for (const auto& bucket : buckets) total += bucket.size();
    cdf.sorted_values.reserve(total);
    for (auto& bucket : buckets) {
        cdf.sorted_values.insert(cdf.sorted_values.end(), bucket.begin(), bucket.end());
        bucket.clear();
        bucket.shrink_to_fit();
    }
    cdf.n_kept = cdf.sorted_values.size();
    if (plan.region && cdf.n_kept < 100)
        throw Error("sample_abs_f: effective sample size < 100 in region mode");
    std::sort(cdf.sorted_values.begin(), cdf.sorted_values.end());
    return cdf;
}

/// Monte-Carlo estimate with standard error.
struct ZetaEstimate {
    std::complex<double> value;
    double stderr_combined = 0.0;
    std::uint64_t n_drawn = 0;
    std::uint64_t n_kept = 0;
    bool variance_blowup = false;  // stderr/|mean| > 0.5
};

/// Z_f(phi; s) = E[|f|^{2s}] under the Gaussian test function, normalized so
/// that f = x gives Gamma(s+1). With weight_abs2 = true the integrand carries
/// an extra |f|^2 factor (the multiplication-by-t side of the shift identity).
inline ZetaEstimate eval_zeta_direct(const Polynomial& f, const SamplePlan& plan,
                                     std::complex<double> s, bool weight_abs2 = false) {
    if (f.is_constant()) throw Error("eval_zeta_direct: constant polynomial");
    if (plan.nsamples < 10'000) throw Error("eval_zeta_direct: nsamples must be >= 1e4");
    std::size_t nvars = f.nvars();
    std::uint64_t nchunks = (plan.nsamples + detail::kChunkSize - 1) / detail::kChunkSize;
    struct ChunkSums {
        double re = 0, im = 0, re2 = 0, im2 = 0;
        std::uint64_t kept = 0;
    };
    std::vector<ChunkSums> sums(nchunks);

    const std::complex<double> two_s = 2.0 * s;
    detail::run_chunks(plan.nsamples, [&](std::uint64_t chunk, std::uint64_t b, std::uint64_t e) {
        PolynomialEvaluator eval(f);
        detail::GaussianPointStream gen(nvars, plan, b);
        std::vector<std::complex<double>> x(nvars);
        detail::KahanSum kre, kim, kre2, kim2;
        std::uint64_t kept = 0;
        for (std::uint64_t i = b; i < e; ++i) {
            gen.next(x.data());
            if (plan.region && !detail::in_region(x.data(), nvars, *plan.region)) continue;
            double av = std::abs(eval(x.data()));
            std::complex<double> w{0.0, 0.0};
            if (av > 0.0) {
                double lg = std::log(av);
                w = std::exp(two_s * lg);
                if (weight_abs2) w *= av * av;
            }
            kre.add(w.real());
            kim.add(w.imag());
            kre2.add(w.real() * w.real());
            kim2.add(w.imag() * w.imag());
            ++kept;
        }
        sums[chunk] = ChunkSums{kre.sum, kim.sum, kre2.sum, kim2.sum, kept};
    });

    std::vector<double> re, im, re2, im2;
    std::uint64_t kept = 0;
    for (const auto& c : sums) {
        re.push_back(c.re);
        im.push_back(c.im);
        re2.push_back(c.re2);
        im2.push_back(c.im2);
        kept += c.kept;
    }
    if (kept < 2) throw Error("eval_zeta_direct: no samples kept (degenerate region)");
    double n = static_cast<double>(kept);
    double mre = detail::pairwise_total(std::move(re)) / n;
    double mim = detail::pairwise_total(std::move(im)) / n;
    double sre2 = detail::pairwise_total(std::move(re2));
    double sim2 = detail::pairwise_total(std::move(im2));
    double var_re = std::max(0.0, (sre2 - n * mre * mre) / (n - 1.0));
    double var_im = std::max(0.0, (sim2 - n * mim * mim) / (n - 1.0));

    ZetaEstimate z;
    z.value = {mre, mim};
    z.stderr_combined = std::sqrt((var_re + var_im) / n);
    z.n_drawn = plan.nsamples;
    z.n_kept = kept;
    double mag = std::abs(z.value);
    z.variance_blowup = (mag == 0.0) || (z.stderr_combined / mag > 0.5);
    return z;
}

}  // namespace arczeta
