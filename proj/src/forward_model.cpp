#include "lfholo/forward_model.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "fft_engine.hpp"
#include "parallel.hpp"

namespace lfholo {

bool SystemConfig::masks_optimizable() const {
    for (const FourierMask& m : masks) {
        if (m.mode == MaskMode::optimizable_lowres) {
            return true;
        }
    }
    return false;
}

void SystemConfig::validate() const {
    slm_grid.validate();
    hdo.validate();
    if (frames < 1) {
        throw StructuralError("SystemConfig: frames must be >= 1");
    }
    if (sources.sources.empty()) {
        throw StructuralError("SystemConfig: at least one source is required");
    }
    if (static_cast<int>(masks.size()) != frames) {
        throw StructuralError("SystemConfig: need exactly one Fourier mask per frame (" + std::to_string(masks.size()) +
                              " masks, " + std::to_string(frames) + " frames)");
    }
    if (sources.schedule == Schedule::sequential && frames != static_cast<int>(sources.count())) {
        throw StructuralError("SystemConfig: sequential schedules need one frame per source");
    }
    for (const SourceSpec& s : sources.sources) {
        s.validate(slm_grid.wavelength);
    }
    if (quant_levels != 0 && quant_levels < 2) {
        throw StructuralError("SystemConfig: quantization levels must be 0 or >= 2");
    }
    if (!std::isfinite(z)) {
        throw StructuralError("SystemConfig: propagation distance must be finite");
    }
}

struct ViewTapeFrame {
    bool dark = true;
    std::vector<cplx> phasor;            // native, quantized
    std::vector<std::uint32_t> support;  // bins where H * P * M != 0
    std::vector<cplx> transfer;          // H * P * M on the support
    std::vector<unsigned char> rows;     // rows holding support bins
    std::vector<cplx> modulated;         // hdo(a) * screen
    std::vector<cplx> spectrum;          // F{hdo(a) * screen}, fast-path frames only
};

struct ViewTape {
    using Frame = ViewTapeFrame;
    struct Pair {
        int frame = 0;
        int source = 0;
        double weight = 0.0;
        bool skipped = false;
        std::vector<cplx> spectrum;  // unweighted F{hdo(a) * screen * tilt} on the frame support
        std::vector<cplx> field;     // image-plane field through P * M
    };

    PupilSpec pupil;
    FrequencyMask pupil_mask;
    std::vector<Frame> frames;
    std::vector<Pair> pairs;
    ViewImage amplitude;
};

ForwardModel::ForwardModel(SystemConfig cfg, Precision precision, int jobs)
    : cfg_(std::move(cfg)), precision_(precision), jobs_(std::max(jobs, 1)) {
    cfg_.validate();
    sim_grid_ = cfg_.sim_grid();
    kernel_ = KernelCache::global().get(sim_grid_, cfg_.z);
    for (const SourceSpec& s : cfg_.sources.sources) {
        SourceSpec unit = s;
        unit.weight = 1.0;
        shifts_.push_back(exact_bin_shift(unit, sim_grid_));
        tilts_.push_back(shifts_.back() ? ComplexField{} : tilt_field(unit, sim_grid_));
    }
    if (cfg_.phase_screen_seed) {
        screen_ = random_phase_screen(sim_grid_, *cfg_.phase_screen_seed);
    }
}

ForwardModel::~ForwardModel() = default;
ForwardModel::ForwardModel(ForwardModel&&) noexcept = default;
ForwardModel& ForwardModel::operator=(ForwardModel&&) noexcept = default;

double ForwardModel::weight(const HologramParams& params, int frame, int source) const {
    if (params.source_weights.empty()) {
        return cfg_.sources.sources[source].weight;
    }
    return params.source_weights[static_cast<std::size_t>(frame) * source_count() + source];
}

std::vector<cplx> ForwardModel::modulated(const PhasePattern& psi) const {
    if (psi.grid() != cfg_.slm_grid) {
        throw StructuralError("phase pattern is not on the SLM grid");
    }
    const ComplexField up = supersample_hdo(phasor(psi), cfg_.hdo);
    std::vector<cplx> b(up.values().begin(), up.values().end());
    if (screen_) {
        auto s = screen_->values();
        for (std::size_t i = 0; i < b.size(); ++i) {
            b[i] *= s[i];
        }
    }
    return b;
}

std::vector<cplx> ForwardModel::source_spectrum(std::span<const cplx> modulated,
                                                std::span<const cplx> modulated_spectrum, int source) const {
    if (const auto& shift = shifts_[source]) {
        return circshift<cplx>(modulated_spectrum, sim_grid_.nx, sim_grid_.ny, shift->dx, shift->dy);
    }
    std::vector<cplx> c(modulated.begin(), modulated.end());
    auto t = tilts_[source].values();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] *= t[i];
    }
    dft2_inplace(c, sim_grid_.nx, sim_grid_.ny, precision_);
    return c;
}

std::vector<FrequencyMask> ForwardModel::realized_masks(const HologramParams& params) const {
    if (static_cast<int>(params.masks.size()) != cfg_.frames) {
        throw StructuralError("HologramParams: need one mask per frame");
    }
    std::vector<FrequencyMask> out;
    out.reserve(params.masks.size());
    for (const FourierMask& m : params.masks) {
        out.push_back(realize_mask(m, sim_grid_));
    }
    return out;
}

ComplexField ForwardModel::field_at_image(const PhasePattern& phi, const FrequencyMask& mask_realized, int source,
                                          const FrequencyMask* extra_freq_mask, double weight) const {
    if (source < 0 || source >= source_count()) {
        throw StructuralError("field_at_image: source index out of range");
    }
    if (mask_realized.grid() != sim_grid_ || (extra_freq_mask && extra_freq_mask->grid() != sim_grid_)) {
        throw StructuralError("field_at_image: mask is not on the simulation grid");
    }
    const double w = weight >= 0.0 ? weight : cfg_.sources.sources[source].weight;
    const std::vector<cplx> b = modulated(phi);
    std::vector<cplx> spectrum_b;
    if (shifts_[source]) {
        spectrum_b = b;
        dft2_inplace(spectrum_b, sim_grid_.nx, sim_grid_.ny, precision_);
    }
    std::vector<cplx> d = source_spectrum(b, spectrum_b, source);
    auto p = mask_realized.values();
    for (std::size_t i = 0; i < d.size(); ++i) {
        double m = p[i] * w;
        if (extra_freq_mask) {
            m *= extra_freq_mask->values()[i];
        }
        d[i] *= kernel_->values[i] * m;
    }
    idft2_inplace(d, sim_grid_.nx, sim_grid_.ny, precision_);
    return ComplexField(sim_grid_, std::move(d));
}

std::vector<cplx> ForwardModel::spectrum_on_support(const ViewTapeFrame& frame, int source) const {
    const int nx = sim_grid_.nx;
    const int ny = sim_grid_.ny;
    std::vector<cplx> out(frame.support.size());
    if (const auto& shift = shifts_[source]) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const int x = static_cast<int>(frame.support[i] % nx);
            const int y = static_cast<int>(frame.support[i] / nx);
            const int sx = ((x - shift->dx) % nx + nx) % nx;
            const int sy = ((y - shift->dy) % ny + ny) % ny;
            out[i] = frame.spectrum[static_cast<std::size_t>(sy) * nx + sx];
        }
        return out;
    }
    const std::vector<cplx> c = source_spectrum(frame.modulated, {}, source);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = c[frame.support[i]];
    }
    return out;
}

std::shared_ptr<ViewTape> ForwardModel::forward(const HologramParams& params, const PupilSpec& pupil) const {
    const int frames = cfg_.frames;
    if (static_cast<int>(params.phases.size()) != frames) {
        throw StructuralError("HologramParams: need one phase pattern per frame");
    }
    if (!params.source_weights.empty() &&
        params.source_weights.size() != static_cast<std::size_t>(frames) * source_count()) {
        throw StructuralError("HologramParams: source weight count must be frames * sources");
    }
    const int nx = sim_grid_.nx;
    const std::size_t n = sim_grid_.size();
    auto tape = std::make_shared<ViewTape>();
    tape->pupil = pupil;
    tape->pupil_mask = pupil_mask(pupil, sim_grid_);
    const auto masks = realized_masks(params);
    const auto pm = tape->pupil_mask.values();

    tape->frames.resize(frames);
    for (int t = 0; t < frames; ++t) {
        ViewTape::Frame& f = tape->frames[t];
        const PhasePattern psi = quantize_phase(params.phases[t], cfg_.quant_levels);
        const ComplexField a = phasor(psi);
        f.phasor.assign(a.values().begin(), a.values().end());

        const auto pv = masks[t].values();
        f.rows.assign(sim_grid_.ny, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx k = kernel_->values[i] * (pv[i] * pm[i]);
            if (k != cplx{0.0, 0.0}) {
                f.support.push_back(static_cast<std::uint32_t>(i));
                f.transfer.push_back(k);
                f.rows[i / nx] = 1;
            }
        }
        f.dark = f.support.empty();
        if (f.dark) {
            continue;
        }
        f.modulated = modulated(psi);
        for (int j : cfg_.sources.active_sources(t, frames)) {
            if (shifts_[j]) {
                f.spectrum = f.modulated;
                dft2_inplace(f.spectrum, sim_grid_.nx, sim_grid_.ny, precision_);
                break;
            }
        }
    }

    for (int t = 0; t < frames; ++t) {
        for (int j : cfg_.sources.active_sources(t, frames)) {
            ViewTape::Pair pair;
            pair.frame = t;
            pair.source = j;
            pair.weight = weight(params, t, j);
            pair.skipped = tape->frames[t].dark;
            tape->pairs.push_back(std::move(pair));
        }
    }

    detail::parallel_for(tape->pairs.size(), jobs_, [&](std::size_t i) {
        ViewTape::Pair& pair = tape->pairs[i];
        if (pair.skipped) {
            return;
        }
        const ViewTape::Frame& f = tape->frames[pair.frame];
        pair.spectrum = spectrum_on_support(f, pair.source);
        pair.field.assign(n, cplx{});
        for (std::size_t k = 0; k < f.support.size(); ++k) {
            pair.field[f.support[k]] = pair.spectrum[k] * f.transfer[k] * pair.weight;
        }
        detail::fft2_rows(pair.field, sim_grid_.nx, sim_grid_.ny, detail::FftDirection::inverse, precision_, f.rows);
    });

    std::vector<double> intensity(n, 0.0);
    const double inv_t = 1.0 / frames;
    for (const ViewTape::Pair& pair : tape->pairs) {
        if (pair.skipped) {
            continue;
        }
        for (std::size_t s = 0; s < n; ++s) {
            intensity[s] += std::norm(pair.field[s]) * inv_t;
        }
    }
    for (double& v : intensity) {
        v = std::sqrt(v);
    }
    tape->amplitude = ViewImage(sim_grid_, std::move(intensity));
    return tape;
}

const ViewImage& ForwardModel::amplitude(const ViewTape& tape) const { return tape.amplitude; }

ParamGradients ForwardModel::backward(const ViewTape& tape, const HologramParams& params,
                                      std::span<const double> dloss_damp) const {
    const int nx = sim_grid_.nx;
    const int ny = sim_grid_.ny;
    const std::size_t n = sim_grid_.size();
    if (dloss_damp.size() != n) {
        throw StructuralError("backward: gradient does not match the view grid");
    }
    const int frames = cfg_.frames;
    const int sources = source_count();
    const double inv_t = 1.0 / frames;

    // dL/dI = dL/dA / (2A); zero where the view is dark (A = 0).
    const auto amp = tape.amplitude.values();
    std::vector<double> grad_intensity(n);
    for (std::size_t s = 0; s < n; ++s) {
        grad_intensity[s] = amp[s] > 0.0 ? dloss_damp[s] / (2.0 * amp[s]) : 0.0;
    }

    struct PairGrad {
        std::vector<cplx> spectral;  // fast path: gradient w.r.t. the shifted spectrum on the support
        std::vector<cplx> spatial;   // general path: gradient w.r.t. the modulated field
        std::vector<double> mask;    // dL/dP on the support
        double weight = 0.0;
    };
    std::vector<PairGrad> pair_grads(tape.pairs.size());
    const auto pm = tape.pupil_mask.values();

    detail::parallel_for(tape.pairs.size(), jobs_, [&](std::size_t i) {
        const ViewTape::Pair& pair = tape.pairs[i];
        if (pair.skipped) {
            return;
        }
        const ViewTape::Frame& f = tape.frames[pair.frame];
        PairGrad& out = pair_grads[i];
        std::vector<cplx> g(n);
        for (std::size_t s = 0; s < n; ++s) {
            g[s] = 2.0 * inv_t * grad_intensity[s] * pair.field[s];
        }
        detail::fft2_rows(g, nx, ny, detail::FftDirection::forward, precision_, f.rows);
        const std::size_t m = f.support.size();
        out.mask.resize(m);
        std::vector<cplx> gc(m);
        double dw = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::uint32_t s = f.support[k];
            const cplx prod = std::conj(g[s]) * pair.spectrum[k];
            dw += (prod * f.transfer[k]).real();
            out.mask[k] = (prod * kernel_->values[s]).real() * pair.weight * pm[s];
            gc[k] = pair.weight * g[s] * std::conj(f.transfer[k]);
        }
        out.weight = dw;
        if (shifts_[pair.source]) {
            out.spectral = std::move(gc);
            return;
        }
        std::vector<cplx> full(n, cplx{});
        for (std::size_t k = 0; k < m; ++k) {
            full[f.support[k]] = gc[k];
        }
        idft2_inplace(full, nx, ny, precision_);
        auto tv = tilts_[pair.source].values();
        for (std::size_t s = 0; s < n; ++s) {
            full[s] *= std::conj(tv[s]);
        }
        out.spatial = std::move(full);
    });

    ParamGradients grads;
    grads.phases.resize(frames);
    grads.mask_logits.resize(frames);
    grads.source_weights.assign(static_cast<std::size_t>(frames) * sources, 0.0);

    for (int t = 0; t < frames; ++t) {
        const ViewTape::Frame& f = tape.frames[t];
        std::vector<cplx> spectral(n, cplx{});
        std::vector<unsigned char> spectral_rows(ny, 0);
        std::vector<cplx> spatial(n, cplx{});
        std::vector<double> mask_grad(n, 0.0);
        bool any_spectral = false;
        for (std::size_t i = 0; i < tape.pairs.size(); ++i) {
            const ViewTape::Pair& pair = tape.pairs[i];
            if (pair.frame != t || pair.skipped) {
                continue;
            }
            const PairGrad& pg = pair_grads[i];
            grads.source_weights[static_cast<std::size_t>(t) * sources + pair.source] = pg.weight;
            for (std::size_t k = 0; k < f.support.size(); ++k) {
                mask_grad[f.support[k]] += pg.mask[k];
            }
            if (!pg.spectral.empty()) {
                any_spectral = true;
                const BinShift& shift = *shifts_[pair.source];
                for (std::size_t k = 0; k < f.support.size(); ++k) {
                    const int x = static_cast<int>(f.support[k] % nx);
                    const int y = static_cast<int>(f.support[k] / nx);
                    const int sx = ((x - shift.dx) % nx + nx) % nx;
                    const int sy = ((y - shift.dy) % ny + ny) % ny;
                    spectral[static_cast<std::size_t>(sy) * nx + sx] += pg.spectral[k];
                    spectral_rows[sy] = 1;
                }
            } else if (!pg.spatial.empty()) {
                for (std::size_t s = 0; s < n; ++s) {
                    spatial[s] += pg.spatial[s];
                }
            }
        }
        if (any_spectral) {
            detail::fft2_rows(spectral, nx, ny, detail::FftDirection::inverse, precision_, spectral_rows);
            for (std::size_t s = 0; s < n; ++s) {
                spatial[s] += spectral[s];
            }
        }
        if (screen_) {
            auto sv = screen_->values();
            for (std::size_t s = 0; s < n; ++s) {
                spatial[s] *= std::conj(sv[s]);
            }
        }
        const ComplexField ga =
            supersample_hdo_adjoint(ComplexField(sim_grid_, std::move(spatial)), cfg_.hdo, cfg_.slm_grid);
        const auto& a = f.phasor;
        auto& gphi = grads.phases[t];
        gphi.resize(a.size());
        auto gav = ga.values();
        for (std::size_t s = 0; s < a.size(); ++s) {
            gphi[s] = (gav[s] * std::conj(a[s])).imag();
        }
        if (params.masks[t].mode == MaskMode::optimizable_lowres) {
            grads.mask_logits[t] = mask_logit_gradient(params.masks[t], sim_grid_, mask_grad);
        }
    }
    return grads;
}

ViewImage ForwardModel::view_amplitude(const HologramParams& params, const PupilSpec& pupil) const {
    return forward(params, pupil)->amplitude;
}

std::vector<ViewImage> ForwardModel::full_lightfield(const HologramParams& params) const {
    std::vector<ViewImage> views;
    views.reserve(cfg_.pupils.count());
    for (const PupilSpec& p : cfg_.pupils.pupils) {
        views.push_back(view_amplitude(params, p));
    }
    return views;
}

ViewImage view_amplitude(const std::vector<PhasePattern>& phis, const std::vector<FourierMask>& masks,
                         const PupilSpec& pupil, const SystemConfig& cfg) {
    return ForwardModel(cfg).view_amplitude({phis, masks, {}}, pupil);
}

std::vector<ViewImage> full_lightfield(const std::vector<PhasePattern>& phis, const std::vector<FourierMask>& masks,
                                       const SystemConfig& cfg) {
    return ForwardModel(cfg).full_lightfield({phis, masks, {}});
}

Coverage eyebox_coverage(const SystemConfig& cfg, bool include_hdo) {
    const GridSpec sim = cfg.sim_grid();
    const FrequencyAxes axes = freq_coords(sim);
    const double df_x = sim.df_x();
    const double df_y = sim.df_y();
    // One SLM band spans nx_slm x ny_slm bins of the supersampled grid.
    const double half_x = cfg.slm_grid.nx / 2.0;
    const double half_y = cfg.slm_grid.ny / 2.0;
    const double period_x = 1.0 / cfg.slm_grid.pitch_x;
    const double period_y = 1.0 / cfg.slm_grid.pitch_y;
    const int orders = include_hdo ? cfg.hdo.q : 0;
    constexpr double eps = 1e-9;

    Coverage cov{FrequencyMask(sim), 0.0, 0.0};
    for (const SourceSpec& s : cfg.sources.sources) {
        for (int my = -orders; my <= orders; ++my) {
            for (int mx = -orders; mx <= orders; ++mx) {
                const double cx = s.freq_x() + mx * period_x;
                const double cy = s.freq_y() + my * period_y;
                for (int y = 0; y < sim.ny; ++y) {
                    const double uy = (axes.fy[y] - cy) / df_y;
                    if (uy < -half_y - eps || uy >= half_y - eps) {
                        continue;
                    }
                    for (int x = 0; x < sim.nx; ++x) {
                        const double ux = (axes.fx[x] - cx) / df_x;
                        if (ux >= -half_x - eps && ux < half_x - eps) {
                            cov.occupancy(x, y) = 1.0;
                        }
                    }
                }
            }
        }
    }
    double count = 0.0;
    for (double v : cov.occupancy.values()) {
        count += v;
    }
    cov.area = count * df_x * df_y;
    cov.ratio = count / (static_cast<double>(cfg.slm_grid.nx) * cfg.slm_grid.ny);
    return cov;
}

ComplexField random_phase_screen(const GridSpec& grid, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    ComplexField screen(grid);
    for (cplx& v : screen.values()) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        v = std::polar(1.0, 2.0 * std::numbers::pi * u);
    }
    return screen;
}

} // namespace lfholo
