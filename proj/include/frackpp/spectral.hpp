#ifndef FRACKPP_SPECTRAL_HPP
#define FRACKPP_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "frackpp/grid.hpp"

namespace frackpp {

/// FFT-backed spectral operators on a periodic grid.
///
/// Transform plans are created once per instance (plan creation is globally
/// serialized) and are immutable afterwards; they may be shared across
/// threads. All mutable state lives in Workspace objects, one per concurrent
/// operation.
class SpectralOp {
  public:
    explicit SpectralOp(const Grid& g);
    ~SpectralOp();
    SpectralOp(const SpectralOp&) = delete;
    SpectralOp& operator=(const SpectralOp&) = delete;

    const Grid& grid() const { return grid_; }
    /// Number of complex coefficients in the real-to-complex layout.
    std::size_t complex_size() const { return n_complex_; }

    /// Per-operation scratch buffers. `spec` holds complex coefficients as
    /// interleaved (re, im) pairs, 2*complex_size() doubles.
    struct Workspace {
        Workspace(std::size_t n_real, std::size_t n_complex);
        ~Workspace();
        Workspace(const Workspace&) = delete;
        Workspace& operator=(const Workspace&) = delete;
        double* real = nullptr;
        double* spec = nullptr;
        std::size_t n_real = 0;
        std::size_t n_complex = 0;
    };
    std::unique_ptr<Workspace> make_workspace() const;

    /// Forward transform of `in` (total_points doubles) into w.spec.
    void forward(const double* in, Workspace& w) const;
    /// Inverse transform of w.spec into `out`, normalized so that
    /// inverse(forward(u)) == u. Destroys w.spec.
    void inverse(Workspace& w, double* out) const;

    /// Multiplier |xi|^{2s} over the complex layout, one double per
    /// coefficient. s = 1 gives the classical -Laplacian symbol.
    std::vector<double> symbol(double s) const;

    /// Spectral fractional Laplacian: coefficients scaled by |xi|^{2s}.
    /// Rejects non-finite input; requires s in (0, 1].
    Field apply_fractional_laplacian(const Field& u, double s) const;

  private:
    Grid grid_;
    std::size_t n_real_ = 0;
    std::size_t n_complex_ = 0;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
    std::unique_ptr<Workspace> plan_buf_;
};

}  // namespace frackpp

#endif
