#include "frackpp/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frackpp/special.hpp"

namespace frackpp {

void RadialProfile::validate() const {
    if (radii.size() != values.size())
        throw std::invalid_argument("RadialProfile: radii/values size mismatch");
    if (radii.size() < 2)
        throw std::invalid_argument("RadialProfile: need at least 2 samples");
    if (dim < 1) throw std::invalid_argument("RadialProfile: dim must be >= 1");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || radii[i] < 0.0)
            throw std::invalid_argument("RadialProfile: radii must be finite and nonnegative");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw std::invalid_argument("RadialProfile: radii must be strictly increasing");
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("RadialProfile: values must be finite");
    }
}

TailLaw tail_fit(const RadialProfile& p, double expected_exponent,
                 double r_lo, double r_hi, double correction_gap) {
    p.validate();
    if (r_lo == 0.0) r_lo = p.radii.front();
    if (r_hi == 0.0) r_hi = p.radii.back();
    r_lo = std::max(r_lo, 1.0);
    if (p.radii.back() < 10.0 * r_lo)
        throw std::runtime_error(
            "tail_fit: insufficient tail samples (profile must reach 10*r_lo = " +
            std::to_string(10.0 * r_lo) + ", ends at " + std::to_string(p.radii.back()) + ")");
    if (r_hi < 2.0 * r_lo)
        throw std::runtime_error("tail_fit: window too narrow (need r_hi >= 2*r_lo)");

    std::vector<double> logr, logv, wr, wv;
    int sign = 0;
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        const double r = p.radii[i];
        if (r < r_lo || r > r_hi) continue;
        const double v = p.values[i];
        if (v == 0.0)
            throw std::runtime_error("tail_fit: zero value inside fit window");
        const int sv = v > 0.0 ? 1 : -1;
        if (sign == 0) sign = sv;
        if (sv != sign)
            throw std::runtime_error("tail_fit: sign change inside fit window");
        logr.push_back(std::log(r));
        logv.push_back(std::log(std::abs(v)));
        wr.push_back(r);
        wv.push_back(std::abs(v));
    }
    if (logr.size() < 8)
        throw std::runtime_error("tail_fit: insufficient tail samples (fewer than 8 in window)");

    const LinFit fit = linfit(logr, logv);

    TailLaw law;
    law.exponent = fit.slope;
    law.window = {wr.front(), wr.back()};
    double max_rel = 0.0;
    for (std::size_t i = 0; i < logr.size(); ++i) {
        const double pred = fit.intercept + fit.slope * logr[i];
        max_rel = std::max(max_rel, std::abs(std::expm1(pred - logv[i])));
    }
    law.residual = max_rel;

    const double decade_lo = law.window[1] / 10.0;
    double log_sum = 0.0;
    int n_dec = 0;
    std::vector<double> cx, cy;
    for (std::size_t i = 0; i < wr.size(); ++i) {
        if (wr[i] < decade_lo) continue;
        const double compensated = wv[i] * std::pow(wr[i], -expected_exponent);
        log_sum += std::log(compensated);
        ++n_dec;
        if (correction_gap > 0.0) {
            cx.push_back(std::pow(wr[i], -correction_gap));
            cy.push_back(compensated);
        }
    }
    law.constant = static_cast<double>(sign) * std::exp(log_sum / n_dec);
    if (correction_gap > 0.0 && cx.size() >= 3) {
        const LinFit two_term = linfit(cx, cy);
        law.constant_extrapolated = static_cast<double>(sign) * two_term.intercept;
    } else {
        law.constant_extrapolated = law.constant;
    }
    return law;
}

TailLaw tail_fit_corrected(const RadialProfile& p, double expected_exponent,
                           double r_lo, double r_hi, double gap) {
    p.validate();
    if (!(gap > 0.0)) throw std::invalid_argument("tail_fit_corrected: gap > 0 required");
    r_lo = std::max(r_lo, 1.0);
    if (r_hi < 2.0 * r_lo)
        throw std::runtime_error("tail_fit_corrected: window too narrow (need r_hi >= 2*r_lo)");

    std::vector<double> rr, logr, logv;
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        const double r = p.radii[i];
        if (r < r_lo || r > r_hi) continue;
        const double v = p.values[i];
        if (!(v > 0.0))
            throw std::runtime_error("tail_fit_corrected: nonpositive value inside fit window");
        rr.push_back(r);
        logr.push_back(std::log(r));
        logv.push_back(std::log(v));
    }
    if (rr.size() < 12)
        throw std::runtime_error("tail_fit_corrected: insufficient tail samples (fewer than 12)");

    // |D| r_lo^{-gap} <= 0.7 keeps the term a genuine correction; larger D
    // degenerates the model (log(1+Dr^{-gap}) ~ log D - gap*log r shifts the
    // fitted exponent by gap along an SSE ridge)
    const double d_cap = 0.7 * std::pow(rr.front(), gap);
    const double d_min = -d_cap;
    const double d_max = d_cap;
    auto sse_at = [&](double d, LinFit* out) {
        std::vector<double> y(logv.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = logv[i] - std::log1p(d * std::pow(rr[i], -gap));
        const LinFit f = linfit(logr, y);
        double sse = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double e = y[i] - (f.intercept + f.slope * logr[i]);
            sse += e * e;
        }
        if (out) *out = f;
        return sse;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = d_min, b = d_max;
    double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
    double f1 = sse_at(c1, nullptr), f2 = sse_at(c2, nullptr);
    for (int it = 0; it < 200 && (b - a) > 1e-10 * (d_max - d_min); ++it) {
        if (f1 < f2) {
            b = c2; c2 = c1; f2 = f1;
            c1 = b - phi * (b - a);
            f1 = sse_at(c1, nullptr);
        } else {
            a = c1; c1 = c2; f1 = f2;
            c2 = a + phi * (b - a);
            f2 = sse_at(c2, nullptr);
        }
    }
    const double d_best = 0.5 * (a + b);
    LinFit fit;
    sse_at(d_best, &fit);

    TailLaw law;
    law.exponent = fit.slope;
    law.window = {rr.front(), rr.back()};
    law.constant = std::exp(fit.intercept);
    double max_rel = 0.0, log_sum = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) {
        const double corr = std::log1p(d_best * std::pow(rr[i], -gap));
        const double pred = fit.intercept + fit.slope * logr[i] + corr;
        max_rel = std::max(max_rel, std::abs(std::expm1(pred - logv[i])));
        log_sum += logv[i] - expected_exponent * logr[i] - corr;
    }
    law.residual = max_rel;
    // prefactor at the theoretical exponent with the correction term removed
    law.constant_extrapolated = std::exp(log_sum / static_cast<double>(rr.size()));
    return law;
}

std::vector<double> log_spaced(double r_lo, double r_hi, int n) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || n < 2)
        throw std::invalid_argument("log_spaced: need 0 < r_lo < r_hi and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = std::log(r_hi / r_lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = r_lo * std::exp(step * i);
    out.back() = r_hi;
    return out;
}

}  // namespace frackpp
