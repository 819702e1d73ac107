#ifndef FRACKPP_STEPPER_HPP
#define FRACKPP_STEPPER_HPP

#include <memory>
#include <vector>

#include "frackpp/grid.hpp"
#include "frackpp/params.hpp"
#include "frackpp/spectral.hpp"

namespace frackpp {

/// Time discretizations.
///  imex: the linearization mu (-Delta)^s u is implicit (mu = m max(u)^{m-1},
///        floored), the remainder explicit; unconditionally stable for m >= 1.
///  explicit_euler: fully explicit; dt <= 0.2 h^{2s} / (m max(u)^{m-1}).
///  exact_linear: coefficient-wise exp(-|xi|^{2s} dt); m = 1 (or the
///        linearized reaction mode) only, zero time-discretization error in
///        the diffusion factor.
enum class Scheme { imex, explicit_euler, exact_linear };

struct StepperConfig {
    Scheme scheme = Scheme::imex;
    double dt = 1e-3;
    double t_end = 1.0;
    double positivity_floor = 1e-14;
    std::vector<double> snapshot_times;

    /// Reaction handling (ignored by pure-diffusion runs).
    bool strang = false;               // half reaction, diffusion, half reaction
    bool reaction_linearized = false;  // f'(0) u instead of f(u), no upper clamp
    bool clamp_unit = true;            // clip to [0,1] after the reaction substep

    std::vector<double> level_targets;  // level radii recorded at snapshots
    int rays = 64;                      // angular samples for 2D level radii

    void validate() const;
};

struct SolutionTrace {
    std::vector<double> times;    // once per step, starting at t = 0
    std::vector<double> masses;   // discrete integral of u
    std::vector<double> maxima;
    std::vector<double> minima;
    std::vector<Field> snapshots;
    double clipped_mass = 0.0;      // total mass restored by floor clipping
    double clipped_above = 0.0;     // total mass removed by the unit clamp
    double max_step_growth = 1.0;   // max ratio max(u_{n+1})/max(u_n)
};

struct KppRun {
    ModelParams params;
    SolutionTrace trace;
    std::vector<double> level_targets;
    /// level_radii[j][i]: radius of level level_targets[j] at snapshot i.
    std::vector<std::vector<double>> level_radii;
    std::vector<double> snapshot_times;  // times of the recorded snapshots
};

/// Rescaled time of the linearizing transform: with a = f'(0),
/// tau = [e^{(m-1) a t} - 1] / ((m-1) a), valid on both sides of m = 1 and
/// equal to t in the limit m -> 1 (returned exactly when |m-1| < 1e-14).
/// For m < 1 it saturates at tau_inf = 1/((1-m) a).
double tau_rescale(double t, double m, double a);

/// Upper bound K1 M^{1+2 beta s (m-1)} e^{a t} (tau(t)+tau0)^{2 beta s}
/// |x|^{-(N+2s)} on solutions of the linearized equation whose initial data
/// lie below the source-type bump of mass M at internal time tau0. K1 is the
/// measured tail constant of the source-type profile; it must be supplied
/// (throws when k1 <= 0: missing calibration).
double linearized_supersolution_bound(double x_norm, double t,
                                      const ModelParams& p, double M,
                                      double tau0, double k1);

/// Evolves u_t + (-Delta)^s u^m = 0 (plus the reaction substep in the KPP
/// entry points below). Holds the transform plans and reusable buffers; one
/// instance per concurrent run.
class Stepper {
  public:
    Stepper(const Grid& g, const ModelParams& p, const StepperConfig& cfg,
            bool with_reaction);

    /// One time step in place, advancing field.time by cfg.dt.
    void step(Field& u);

    /// Full run from u0: per-step scalar series plus snapshots.
    SolutionTrace run(const Field& u0);

    const StepperConfig& config() const { return cfg_; }

  private:
    void diffusion_step(std::vector<double>& u);
    void reaction_substep(std::vector<double>& u, double dt_sub);
    void post_clip(std::vector<double>& u);

    Grid grid_;
    ModelParams params_;
    StepperConfig cfg_;
    bool with_reaction_;
    SpectralOp op_;
    std::unique_ptr<SpectralOp::Workspace> ws_u_;
    std::unique_ptr<SpectralOp::Workspace> ws_w_;
    std::vector<double> lambda_;   // |xi|^{2s} over complex layout
    std::vector<double> g1_;       // duplicated per (re, im) pair
    std::vector<double> g2_;
    std::vector<double> wbuf_;     // u^m
    double clipped_mass_ = 0.0;
    double clipped_above_ = 0.0;
    double max_growth_ = 1.0;
};

/// Pure diffusion step/run: u_t + (-Delta)^s u^m = 0.
Field step_fpme(const Field& u, const ModelParams& p, const StepperConfig& cfg);
SolutionTrace run_fpme(const Field& u0, const ModelParams& p,
                       const StepperConfig& cfg);

/// Reaction-diffusion step/run: u_t + (-Delta)^s u^m = f(u).
Field step_kpp(const Field& u, const ModelParams& p, const StepperConfig& cfg);
KppRun run_kpp(const Field& u0, const ModelParams& p, const StepperConfig& cfg);

/// Smallest field value over the closed ball |x| <= radius.
double ball_min(const Field& f, double radius);

}  // namespace frackpp

#endif
