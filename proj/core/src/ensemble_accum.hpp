#ifndef RABISIM_SRC_ENSEMBLE_ACCUM_HPP
#define RABISIM_SRC_ENSEMBLE_ACCUM_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "rabisim/observables.hpp"
#include "rabisim/parallel.hpp"
#include "rabisim/trajectories.hpp"

namespace rabisim::detail {

// Deterministic mean/stderr reduction over an ensemble of runs. Runs are
// grouped into fixed blocks of kEnsembleBlock items; each block accumulates
// its partial sums sequentially in index order and blocks are folded in block
// order, so the totals never depend on how many workers were used.
inline constexpr int kEnsembleBlock = 16;

class MomentTable {
public:
    MomentTable() = default;
    explicit MomentTable(std::size_t n_samples) : sum_(n_samples), sumsq_(n_samples) {}

    void add(std::size_t k, const RawMoments& m) {
        auto& s = sum_[k];
        auto& q = sumsq_[k];
        const double v[8] = {m.n, m.n2, m.sz, m.pe, m.quanta, m.energy, m.norm_err, m.top};
        for (int j = 0; j < 8; ++j) {
            s.v[j] += v[j];
            q.v[j] += v[j] * v[j];
        }
    }

    void fold(const MomentTable& other) {
        for (std::size_t k = 0; k < sum_.size(); ++k) {
            for (int j = 0; j < 8; ++j) {
                sum_[k].v[j] += other.sum_[k].v[j];
                sumsq_[k].v[j] += other.sumsq_[k].v[j];
            }
        }
    }

    RawMoments mean(std::size_t k, int n) const {
        const auto& s = sum_[k];
        const double inv = 1.0 / n;
        return {s.v[0] * inv, s.v[1] * inv, s.v[2] * inv, s.v[3] * inv,
                s.v[4] * inv, s.v[5] * inv, s.v[6] * inv, s.v[7] * inv};
    }

    RawMoments stderror(std::size_t k, int n) const {
        if (n < 2) return {};
        RawMoments out;
        const auto& s = sum_[k];
        const auto& q = sumsq_[k];
        double* fields[8] = {&out.n, &out.n2, &out.sz, &out.pe,
                             &out.quanta, &out.energy, &out.norm_err, &out.top};
        for (int j = 0; j < 8; ++j) {
            const double mean = s.v[j] / n;
            const double var = std::max(0.0, (q.v[j] - n * mean * mean) / (n - 1));
            *fields[j] = std::sqrt(var / n);
        }
        return out;
    }

private:
    struct Row {
        double v[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    };
    std::vector<Row> sum_, sumsq_;
};

/// run_item(i, sink) must call sink(sample_idx, moments) for every sample.
inline EnsembleSeries ensemble_reduce(
    const std::vector<double>& ts, const std::vector<double>& taus, int n_items,
    int threads,
    const std::function<void(int, const std::function<void(int, const RawMoments&)>&)>&
        run_item) {
    const std::size_t n_samples = ts.size();
    const int n_blocks = block_count(n_items, kEnsembleBlock);
    std::vector<MomentTable> blocks(n_blocks);

    parallel_for_indexed(n_blocks, threads, [&](int b) {
        MomentTable table(n_samples);
        const auto range = block_range(b, n_items, kEnsembleBlock);
        for (int i = range.begin; i < range.end; ++i) {
            run_item(i, [&](int k, const RawMoments& m) { table.add(k, m); });
        }
        blocks[b] = std::move(table);
    });

    MomentTable total(n_samples);
    for (const auto& block : blocks) total.fold(block);

    EnsembleSeries out;
    out.mean.rows.reserve(n_samples);
    out.stderror.rows.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        out.mean.rows.push_back(
            ObservableSet::from_moments(total.mean(k, n_items), ts[k], taus[k]));
        ObservableRecord se =
            ObservableSet::from_moments(total.stderror(k, n_items), ts[k], taus[k]);
        se.mandel_q.reset();  // no meaningful error bar for the derived q
        out.stderror.rows.push_back(se);
    }
    return out;
}

} // namespace rabisim::detail

#endif
