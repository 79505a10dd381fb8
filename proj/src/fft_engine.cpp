#include "fft_engine.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace lfholo::detail {
namespace {

// FFTW_ESTIMATE keeps plan selection (and hence rounding) deterministic.
// Buffers that lack SIMD alignment get a separate FFTW_UNALIGNED plan.
constexpr unsigned kPlanFlags = FFTW_ESTIMATE;

using PlanKey = std::tuple<int, int, int, bool>;

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : double_plans_) {
            fftw_destroy_plan(plan);
        }
        for (auto& [key, plan] : float_plans_) {
            fftwf_destroy_plan(plan);
        }
        for (auto& [key, plan] : double_axis_) {
            fftw_destroy_plan(plan);
        }
        for (auto& [key, plan] : float_axis_) {
            fftwf_destroy_plan(plan);
        }
    }

    fftw_plan double_plan(int nx, int ny, FftDirection dir, bool aligned) {
        std::lock_guard lock(mutex_);
        const PlanKey key{nx, ny, static_cast<int>(dir), aligned};
        if (auto it = double_plans_.find(key); it != double_plans_.end()) {
            return it->second;
        }
        auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(nx) * ny));
        fftw_plan plan = fftw_plan_dft_2d(ny, nx, scratch, scratch, dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                          aligned ? kPlanFlags : kPlanFlags | FFTW_UNALIGNED);
        fftw_free(scratch);
        double_plans_.emplace(key, plan);
        return plan;
    }

    fftwf_plan float_plan(int nx, int ny, FftDirection dir, bool aligned) {
        std::lock_guard lock(mutex_);
        const PlanKey key{nx, ny, static_cast<int>(dir), aligned};
        if (auto it = float_plans_.find(key); it != float_plans_.end()) {
            return it->second;
        }
        auto* scratch = static_cast<fftwf_complex*>(fftwf_malloc(sizeof(fftwf_complex) * static_cast<std::size_t>(nx) * ny));
        fftwf_plan plan = fftwf_plan_dft_2d(ny, nx, scratch, scratch, dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                          aligned ? kPlanFlags : kPlanFlags | FFTW_UNALIGNED);
        fftwf_free(scratch);
        float_plans_.emplace(key, plan);
        return plan;
    }

    // kind 0: one contiguous row of nx samples; kind 1: all nx columns of length ny.
    template <class Plan, class Complex, class Malloc, class Free, class Many>
    Plan axis_plan(std::map<std::tuple<int, int, int, int>, Plan>& cache, int nx, int ny, FftDirection dir, int kind,
                   Malloc alloc, Free release, Many plan_many) {
        std::lock_guard lock(mutex_);
        const std::tuple<int, int, int, int> key{nx, ny, static_cast<int>(dir), kind};
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
        auto* scratch = static_cast<Complex*>(alloc(sizeof(Complex) * static_cast<std::size_t>(nx) * ny));
        const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        Plan plan = kind == 0 ? plan_many(1, &nx, 1, scratch, nullptr, 1, nx, scratch, nullptr, 1, nx, sign, kPlanFlags)
                              : plan_many(1, &ny, nx, scratch, nullptr, nx, 1, scratch, nullptr, nx, 1, sign, kPlanFlags);
        release(scratch);
        cache.emplace(key, plan);
        return plan;
    }

    fftw_plan double_axis_plan(int nx, int ny, FftDirection dir, int kind) {
        return axis_plan<fftw_plan, fftw_complex>(double_axis_, nx, ny, dir, kind, fftw_malloc, fftw_free,
                                                  fftw_plan_many_dft);
    }
    fftwf_plan float_axis_plan(int nx, int ny, FftDirection dir, int kind) {
        return axis_plan<fftwf_plan, fftwf_complex>(float_axis_, nx, ny, dir, kind, fftwf_malloc, fftwf_free,
                                                    fftwf_plan_many_dft);
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> double_plans_;
    std::map<PlanKey, fftwf_plan> float_plans_;
    std::map<std::tuple<int, int, int, int>, fftw_plan> double_axis_;
    std::map<std::tuple<int, int, int, int>, fftwf_plan> float_axis_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

} // namespace

void fft2(std::span<cplx> data, int nx, int ny, FftDirection direction, Precision precision) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(nx) * ny);
    if (precision == Precision::f64) {
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_plan plan = plan_cache().double_plan(nx, ny, direction, fftw_alignment_of(reinterpret_cast<double*>(buf)) == 0);
        fftw_execute_dft(plan, buf, buf);
        for (cplx& v : data) {
            v *= scale;
        }
        return;
    }
    thread_local std::vector<std::complex<float>> scratch;
    scratch.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        scratch[i] = std::complex<float>(static_cast<float>(data[i].real()), static_cast<float>(data[i].imag()));
    }
    auto* buf = reinterpret_cast<fftwf_complex*>(scratch.data());
    fftwf_plan plan = plan_cache().float_plan(nx, ny, direction, fftwf_alignment_of(reinterpret_cast<float*>(buf)) == 0);
    fftwf_execute_dft(plan, buf, buf);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = cplx(scratch[i].real(), scratch[i].imag()) * scale;
    }
}

namespace {

template <class Complex, class Plan, class Execute>
void pruned(Complex* buf, int nx, int ny, FftDirection direction, std::span<const unsigned char> rows, Plan row_plan,
            Plan column_plan, Execute execute) {
    auto do_rows = [&] {
        for (int y = 0; y < ny; ++y) {
            if (rows[y]) {
                Complex* row = buf + static_cast<std::size_t>(y) * nx;
                execute(row_plan, row, row);
            }
        }
    };
    if (direction == FftDirection::inverse) {
        do_rows();
        execute(column_plan, buf, buf);
    } else {
        execute(column_plan, buf, buf);
        do_rows();
    }
}

} // namespace

void fft2_rows(std::span<cplx> data, int nx, int ny, FftDirection direction, Precision precision,
               std::span<const unsigned char> rows) {
    if (rows.size() != static_cast<std::size_t>(ny)) {
        throw StructuralError("fft2_rows: row mask does not match the grid");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(nx) * ny);
    if (precision == Precision::f64) {
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        if (fftw_alignment_of(reinterpret_cast<double*>(buf)) != 0) {
            fft2(data, nx, ny, direction, precision);
            return;
        }
        pruned(buf, nx, ny, direction, rows, plan_cache().double_axis_plan(nx, ny, direction, 0),
               plan_cache().double_axis_plan(nx, ny, direction, 1), fftw_execute_dft);
        for (cplx& v : data) {
            v *= scale;
        }
        return;
    }
    thread_local std::vector<std::complex<float>> scratch;
    scratch.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        scratch[i] = std::complex<float>(static_cast<float>(data[i].real()), static_cast<float>(data[i].imag()));
    }
    auto* buf = reinterpret_cast<fftwf_complex*>(scratch.data());
    if (fftwf_alignment_of(reinterpret_cast<float*>(buf)) != 0 || nx % 2 != 0) {
        fft2(data, nx, ny, direction, precision);
        return;
    }
    pruned(buf, nx, ny, direction, rows, plan_cache().float_axis_plan(nx, ny, direction, 0),
           plan_cache().float_axis_plan(nx, ny, direction, 1), fftwf_execute_dft);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = cplx(scratch[i].real(), scratch[i].imag()) * scale;
    }
}

} // namespace lfholo::detail
