#include "lfholo/slm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lfholo/io.hpp"

namespace lfholo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

void HdoModel::validate() const {
    if (q < 1) {
        throw DomainError("HdoModel: supersample factor q must be >= 1");
    }
    if (!(fill_factor > 0.0) || fill_factor > 1.0) {
        throw DomainError("HdoModel: fill factor must lie in (0, 1]");
    }
}

int HdoModel::active_width() const {
    const int w = static_cast<int>(std::lround(fill_factor * q));
    return std::clamp(w, 1, q);
}

int HdoModel::active_offset() const { return (q - active_width()) / 2; }

GridSpec HdoModel::supersampled(const GridSpec& slm_grid) const {
    validate();
    return {slm_grid.nx * q, slm_grid.ny * q, slm_grid.pitch_x / q, slm_grid.pitch_y / q, slm_grid.wavelength};
}

ComplexField phasor(const PhasePattern& phi) {
    ComplexField out(phi.grid());
    auto src = phi.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = cplx(std::cos(src[i]), std::sin(src[i]));
    }
    return out;
}

double wrap_phase(double phi) {
    double w = phi - kTwoPi * std::floor((phi + kPi) / kTwoPi);
    // Rounding can land exactly on +pi; fold it back into [-pi, pi).
    if (w >= kPi) {
        w -= kTwoPi;
    }
    return w;
}

int level_index(double phi, int levels) {
    const double step = kTwoPi / levels;
    const long m = std::lround((wrap_phase(phi) + kPi) / step);
    return static_cast<int>(((m % levels) + levels) % levels);
}

double quantize_value(double phi, int levels) {
    if (levels == 0) {
        return phi;
    }
    return -kPi + kTwoPi * level_index(phi, levels) / levels;
}

PhasePattern quantize_phase(const PhasePattern& phi, int levels) {
    if (levels != 0 && levels < 2) {
        throw DomainError("quantize_phase: levels must be >= 2 (or 0 to disable)");
    }
    PhasePattern out = phi;
    if (levels == 0) {
        return out;
    }
    for (double& v : out.values()) {
        v = quantize_value(v, levels);
    }
    return out;
}

ComplexField supersample_hdo(const ComplexField& u, const HdoModel& model) {
    const GridSpec& g = u.grid();
    const GridSpec sg = model.supersampled(g);
    const int q = model.q;
    const int w = model.active_width();
    const int off = model.active_offset();
    ComplexField out(sg);
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            const cplx v = u(x, y);
            for (int ry = off; ry < off + w; ++ry) {
                cplx* row = &out(x * q, y * q + ry);
                for (int rx = off; rx < off + w; ++rx) {
                    row[rx] = v;
                }
            }
        }
    }
    return out;
}

ComplexField supersample_hdo_adjoint(const ComplexField& g, const HdoModel& model, const GridSpec& slm_grid) {
    if (g.grid() != model.supersampled(slm_grid)) {
        throw StructuralError("supersample_hdo_adjoint: field is not on the supersampled grid");
    }
    const int q = model.q;
    const int w = model.active_width();
    const int off = model.active_offset();
    ComplexField out(slm_grid);
    for (int y = 0; y < slm_grid.ny; ++y) {
        for (int x = 0; x < slm_grid.nx; ++x) {
            cplx sum{0.0, 0.0};
            for (int ry = off; ry < off + w; ++ry) {
                const cplx* row = &g(x * q, y * q + ry);
                for (int rx = off; rx < off + w; ++rx) {
                    sum += row[rx];
                }
            }
            out(x, y) = sum;
        }
    }
    return out;
}

cplx hdo_envelope(int k, int n, const HdoModel& model) {
    const int w = model.active_width();
    const int off = model.active_offset();
    const double len = static_cast<double>(n) * model.q;
    cplx sum{0.0, 0.0};
    for (int r = off; r < off + w; ++r) {
        sum += std::polar(1.0, -kTwoPi * k * r / len);
    }
    return sum / std::sqrt(static_cast<double>(model.q));
}

void export_phase(const PhasePattern& phi, int levels, const std::filesystem::path& stem) {
    const auto v = phi.values();
    std::vector<std::uint8_t> png(v.size());
    const int lv = levels > 0 ? levels : 256;
    for (std::size_t i = 0; i < v.size(); ++i) {
        png[i] = static_cast<std::uint8_t>(level_index(v[i], lv) * (256 / lv));
    }
    auto with_ext = [&](const char* ext) {
        std::filesystem::path p = stem;
        p += ext;
        return p;
    };
    io::write_png_gray8(with_ext(".png"), phi.grid().nx, phi.grid().ny, png);
    io::write_f32(with_ext(".f32"), v);
    io::write_json(with_ext(".json"), {{"grid", io::grid_to_json(phi.grid())}, {"levels", levels}});
}

PhasePattern import_phase(const std::filesystem::path& stem, int* levels_out) {
    std::filesystem::path meta = stem;
    meta += ".json";
    std::filesystem::path raw = stem;
    raw += ".f32";
    const io::json j = io::read_json(meta);
    const GridSpec grid = io::grid_from_json(j.at("grid"));
    const int levels = j.at("levels").get<int>();
    PhasePattern phi(grid, io::read_f32(raw, grid.size()));
    if (levels_out) {
        *levels_out = levels;
    }
    return levels > 0 ? quantize_phase(phi, levels) : phi;
}

} // namespace lfholo
