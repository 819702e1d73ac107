#include "frackpp/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace frackpp {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

SpectralOp::Workspace::Workspace(std::size_t nr, std::size_t nc)
    : n_real(nr), n_complex(nc) {
    real = static_cast<double*>(fftw_malloc(sizeof(double) * nr));
    spec = static_cast<double*>(fftw_malloc(sizeof(double) * 2 * nc));
    if (!real || !spec) throw std::bad_alloc();
}

SpectralOp::Workspace::~Workspace() {
    fftw_free(real);
    fftw_free(spec);
}

SpectralOp::SpectralOp(const Grid& g) : grid_(g) {
    const int n = g.points_per_axis;
    n_real_ = g.total_points();
    n_complex_ = (g.dim == 1) ? static_cast<std::size_t>(n / 2 + 1)
                              : static_cast<std::size_t>(n) * (n / 2 + 1);
    plan_buf_ = std::make_unique<Workspace>(n_real_, n_complex_);
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (g.dim == 1) {
        fwd_ = fftw_plan_dft_r2c_1d(n, plan_buf_->real,
                                    reinterpret_cast<fftw_complex*>(plan_buf_->spec),
                                    FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(plan_buf_->spec),
                                    plan_buf_->real, FFTW_ESTIMATE);
    } else {
        fwd_ = fftw_plan_dft_r2c_2d(n, n, plan_buf_->real,
                                    reinterpret_cast<fftw_complex*>(plan_buf_->spec),
                                    FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(plan_buf_->spec),
                                    plan_buf_->real, FFTW_ESTIMATE);
    }
    if (!fwd_ || !bwd_) throw std::runtime_error("SpectralOp: FFT plan creation failed");
}

SpectralOp::~SpectralOp() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

std::unique_ptr<SpectralOp::Workspace> SpectralOp::make_workspace() const {
    return std::make_unique<Workspace>(n_real_, n_complex_);
}

void SpectralOp::forward(const double* in, Workspace& w) const {
    std::memcpy(w.real, in, sizeof(double) * n_real_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), w.real,
                         reinterpret_cast<fftw_complex*>(w.spec));
}

void SpectralOp::inverse(Workspace& w, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_),
                         reinterpret_cast<fftw_complex*>(w.spec), w.real);
    const double inv_n = 1.0 / static_cast<double>(n_real_);
    for (std::size_t i = 0; i < n_real_; ++i) out[i] = w.real[i] * inv_n;
}

std::vector<double> SpectralOp::symbol(double s) const {
    const int n = grid_.points_per_axis;
    std::vector<double> sym(n_complex_);
    if (grid_.dim == 1) {
        for (int k = 0; k <= n / 2; ++k) {
            const double xi = grid_.freq(k);
            sym[static_cast<std::size_t>(k)] = std::pow(xi * xi, s);
        }
    } else {
        const int nc = n / 2 + 1;
        for (int kx = 0; kx < n; ++kx) {
            const double fx = grid_.freq(kx);
            for (int ky = 0; ky < nc; ++ky) {
                const double fy = grid_.freq(ky);
                sym[static_cast<std::size_t>(kx) * nc + ky] =
                    std::pow(fx * fx + fy * fy, s);
            }
        }
    }
    sym[0] = 0.0;
    return sym;
}

Field SpectralOp::apply_fractional_laplacian(const Field& u, double s) const {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("apply_fractional_laplacian: s must be in (0, 1]");
    if (!(u.grid == grid_))
        throw std::invalid_argument("apply_fractional_laplacian: grid mismatch");
    for (double v : u.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("apply_fractional_laplacian: non-finite input");

    auto w = make_workspace();
    forward(u.values.data(), *w);
    const std::vector<double> sym = symbol(s);
    for (std::size_t i = 0; i < n_complex_; ++i) {
        w->spec[2 * i] *= sym[i];
        w->spec[2 * i + 1] *= sym[i];
    }
    Field out(u.grid);
    out.time = u.time;
    inverse(*w, out.values.data());
    return out;
}

}  // namespace frackpp
