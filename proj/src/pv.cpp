#include "solsim/pv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "solsim/error.hpp"
#include "solsim/numeric.hpp"

namespace solsim {

namespace {

constexpr double thermal_voltage_25c = 0.025693; // kT/q at 298.15 K, volts
constexpr double reference_irradiance = 1000.0;  // W/m^2

// Implicit-equation residual F(I) at fixed voltage; F is strictly
// decreasing in I, so the physical root is unique.
double diode_residual(double i, double v, double i_ph, const DiodeModel& m) {
    const double a = m.modified_ideality();
    return i_ph - m.i_0 * (std::exp((v + i * m.r_s) / a) - 1.0) - (v + i * m.r_s) / m.r_sh - i;
}

double diode_residual_di(double i, double v, const DiodeModel& m) {
    const double a = m.modified_ideality();
    return -m.i_0 * m.r_s / a * std::exp((v + i * m.r_s) / a) - m.r_s / m.r_sh - 1.0;
}

// dI/dV along the IV curve (implicit differentiation).
double iv_slope(double v, double i, const DiodeModel& m) {
    const double a = m.modified_ideality();
    const double e = m.i_0 / a * std::exp((v + i * m.r_s) / a);
    return -(e + 1.0 / m.r_sh) / (1.0 + m.r_s * e + m.r_s / m.r_sh);
}

// Anchor residuals at standard test conditions, all in amperes.
std::array<double, 4> anchor_residuals(const DiodeModel& m, const PanelSpec& s) {
    const double f_sc = diode_residual(s.i_sc_a, 0.0, m.i_ph_ref, m);
    const double f_oc = diode_residual(0.0, s.v_oc_v, m.i_ph_ref, m);
    const double f_mp = diode_residual(s.i_mp_a, s.v_mp_v, m.i_ph_ref, m);
    // dP/dV = I + V dI/dV vanishes at the maximum power point.
    const double f_slope = s.i_mp_a + s.v_mp_v * iv_slope(s.v_mp_v, s.i_mp_a, m);
    return {f_sc, f_oc, f_mp, f_slope};
}

double max_abs(const std::array<double, 4>& f) {
    double v = 0.0;
    for (double x : f) v = std::max(v, std::abs(x));
    return v;
}

const char* anchor_name(const std::array<double, 4>& f) {
    std::size_t worst = 0;
    for (std::size_t k = 1; k < f.size(); ++k)
        if (std::abs(f[k]) > std::abs(f[worst])) worst = k;
    static const char* names[] = {"short-circuit", "open-circuit", "max-power",
                                  "max-power slope"};
    return names[worst];
}

} // namespace

double DiodeModel::modified_ideality() const {
    return n * static_cast<double>(n_cells) * thermal_voltage_25c;
}

PanelSpec reference_panel() {
    PanelSpec s;
    s.stc_power_w = 250.0;
    s.ptc_power_w = 226.47;
    s.noct_c = 45.0;
    s.power_per_area_wm2 = 153.7;
    s.peak_efficiency_pct = 15.39;
    s.n_cells = 60;
    s.i_mp_a = 8.17;
    s.v_mp_v = 30.60;
    s.i_sc_a = 8.71;
    s.v_oc_v = 36.3;
    return s;
}

void validate_panel_spec(const PanelSpec& s) {
    if (!(s.i_mp_a > 0.0 && s.i_mp_a < s.i_sc_a))
        throw ExtractionError("panel spec: need 0 < i_mp < i_sc");
    if (!(s.v_mp_v > 0.0 && s.v_mp_v < s.v_oc_v))
        throw ExtractionError("panel spec: need 0 < v_mp < v_oc");
    if (s.n_cells < 1) throw ExtractionError("panel spec: need at least one cell");
    if (s.i_mp_a * s.v_mp_v > s.stc_power_w * 1.01)
        throw ExtractionError("panel spec: MPP power exceeds rated power");
}

PanelSpec load_panel_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ExtractionError("panel spec " + path.string() + ": " + e.what());
    }
    const PanelSpec ref = reference_panel();
    PanelSpec s;
    try {
        s.i_mp_a = j.at("i_mp_a").get<double>();
        s.v_mp_v = j.at("v_mp_v").get<double>();
        s.i_sc_a = j.at("i_sc_a").get<double>();
        s.v_oc_v = j.at("v_oc_v").get<double>();
        s.n_cells = j.at("n_cells").get<int>();
        s.stc_power_w = j.at("stc_power_w").get<double>();
        s.ptc_power_w = j.value("ptc_power_w", ref.ptc_power_w);
        s.noct_c = j.value("noct_c", ref.noct_c);
        s.power_per_area_wm2 = j.value("power_per_area_wm2", ref.power_per_area_wm2);
        s.peak_efficiency_pct = j.value("peak_efficiency_pct", ref.peak_efficiency_pct);
    } catch (const nlohmann::json::exception& e) {
        throw ExtractionError("panel spec " + path.string() + ": " + e.what());
    }
    validate_panel_spec(s);
    return s;
}

DiodeModel extract_diode_model(const PanelSpec& spec) {
    validate_panel_spec(spec);

    DiodeModel m;
    m.n = 1.3;
    m.n_cells = spec.n_cells;
    m.v_oc_ref = spec.v_oc_v;

    // Standard initial guesses: photocurrent from Isc, series resistance
    // from the MPP-to-OC slope, shunt large, saturation current from the
    // open-circuit balance.
    m.i_ph_ref = spec.i_sc_a;
    m.r_s = 0.5 * (spec.v_oc_v - spec.v_mp_v) / spec.i_mp_a;
    m.r_sh = 100.0 * spec.v_oc_v / spec.i_sc_a;
    const double a = m.modified_ideality();
    m.i_0 = (m.i_ph_ref - spec.v_oc_v / m.r_sh) / (std::exp(spec.v_oc_v / a) - 1.0);

    // Newton on x = (i_ph, ln i_0, r_s, r_sh); the log keeps i_0 positive.
    std::array<double, 4> x = {m.i_ph_ref, std::log(m.i_0), m.r_s, m.r_sh};
    auto apply = [&](const std::array<double, 4>& v) {
        DiodeModel t = m;
        t.i_ph_ref = v[0];
        t.i_0 = std::exp(v[1]);
        t.r_s = v[2];
        t.r_sh = v[3];
        return t;
    };

    const double tol = 1e-10;
    bool converged = false;
    std::array<double, 4> f = anchor_residuals(m, spec);
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        if (max_abs(f) <= tol) {
            converged = true;
            break;
        }
        // Forward-difference Jacobian.
        double jac[4][4];
        for (int col = 0; col < 4; ++col) {
            auto xp = x;
            const double h = std::max(1e-8, 1e-7 * std::abs(x[col]));
            xp[col] += h;
            const auto fp = anchor_residuals(apply(xp), spec);
            for (int row = 0; row < 4; ++row) jac[row][col] = (fp[row] - f[row]) / h;
        }
        // Solve jac * dx = -f by elimination with partial pivoting.
        std::array<double, 4> rhs = {-f[0], -f[1], -f[2], -f[3]};
        for (int col = 0; col < 4; ++col) {
            int pivot = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(jac[r][col]) > std::abs(jac[pivot][col])) pivot = r;
            if (std::abs(jac[pivot][col]) < 1e-30)
                throw ExtractionError("diode extraction: singular Jacobian");
            for (int c = 0; c < 4; ++c) std::swap(jac[col][c], jac[pivot][c]);
            std::swap(rhs[col], rhs[pivot]);
            for (int r = col + 1; r < 4; ++r) {
                const double fac = jac[r][col] / jac[col][col];
                for (int c = col; c < 4; ++c) jac[r][c] -= fac * jac[col][c];
                rhs[r] -= fac * rhs[col];
            }
        }
        std::array<double, 4> dx{};
        for (int r = 3; r >= 0; --r) {
            double s = rhs[r];
            for (int c = r + 1; c < 4; ++c) s -= jac[r][c] * dx[c];
            dx[r] = s / jac[r][r];
        }
        // Damping: halve until the residual norm drops and the
        // parameters stay physical.
        const double f_norm = max_abs(f);
        double lambda = 1.0;
        for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
            std::array<double, 4> xn = x;
            for (int k = 0; k < 4; ++k) xn[k] += lambda * dx[k];
            if (!(xn[0] > 0.0 && xn[2] > 0.0 && xn[3] > 0.0)) continue;
            const auto fn = anchor_residuals(apply(xn), spec);
            if (max_abs(fn) < f_norm) {
                x = xn;
                f = fn;
                break;
            }
            if (halving == 39) throw ExtractionError("diode extraction: line search stalled at " +
                                                     std::string(anchor_name(f)) + " anchor");
        }
    }
    m = apply(x);
    f = anchor_residuals(m, spec);
    if (max_abs(f) > 1e-6)
        throw ExtractionError(std::string("diode extraction did not converge; worst anchor: ") +
                              anchor_name(f));

    // Self-check against the published tolerances.
    const double i_sc_err = std::abs(iv_current(0.0, reference_irradiance, m) - spec.i_sc_a);
    const double i_oc_err = std::abs(iv_current(spec.v_oc_v, reference_irradiance, m));
    if (i_sc_err > 0.001 * spec.i_sc_a)
        throw ExtractionError("diode extraction: short-circuit anchor off by " +
                              std::to_string(i_sc_err) + " A");
    if (i_oc_err > 0.001 * spec.i_sc_a)
        throw ExtractionError("diode extraction: open-circuit anchor off by " +
                              std::to_string(i_oc_err) + " A");
    const auto mp = mpp(reference_irradiance, m);
    const double p_ref = spec.v_mp_v * spec.i_mp_a;
    if (std::abs(mp.p - p_ref) > 0.01 * p_ref)
        throw ExtractionError("diode extraction: max-power anchor off by " +
                              std::to_string(mp.p - p_ref) + " W");
    return m;
}

DiodeModel series_string(const DiodeModel& panel, int count) {
    if (count < 1) throw ExtractionError("series_string: count must be positive");
    DiodeModel s = panel;
    s.n_cells = panel.n_cells * count;
    s.r_s = panel.r_s * static_cast<double>(count);
    s.r_sh = panel.r_sh * static_cast<double>(count);
    s.v_oc_ref = panel.v_oc_ref * static_cast<double>(count);
    return s;
}

double iv_current(double v, double g, const DiodeModel& m) {
    if (g < 0.0) throw ExtractionError("iv_current: negative irradiance");
    const double i_ph = m.i_ph_ref * g / reference_irradiance;

    double i = i_ph - v / m.r_sh;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        const double f = diode_residual(i, v, i_ph, m);
        if (std::abs(f) <= 1e-12) {
            converged = true;
            break;
        }
        const double df = diode_residual_di(i, v, m);
        double step = -f / df;
        // F is monotone; keep steps from overshooting into exp overflow.
        const double limit = 10.0 * (std::abs(i) + 1.0);
        step = std::clamp(step, -limit, limit);
        i += step;
        if (std::abs(step) <= 1e-14 * (1.0 + std::abs(i))) {
            converged = std::abs(diode_residual(i, v, i_ph, m)) <= 1e-9;
            break;
        }
    }
    if (!converged || !(std::abs(diode_residual(i, v, i_ph, m)) <= 1e-9)) {
        // Bisection fallback on an expanding bracket; F is decreasing.
        double lo = -std::abs(i_ph) - 10.0;
        double hi = i_ph + 1.0;
        while (diode_residual(lo, v, i_ph, m) < 0.0) lo -= std::max(1.0, std::abs(lo));
        while (diode_residual(hi, v, i_ph, m) > 0.0) hi += std::max(1.0, std::abs(hi));
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (diode_residual(mid, v, i_ph, m) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        i = 0.5 * (lo + hi);
        if (!(std::abs(diode_residual(i, v, i_ph, m)) <= 1e-9))
            throw ExtractionError("iv_current: root refinement failed");
    }
    return i;
}

MppPoint mpp(double g, const DiodeModel& m) {
    if (!(g > 0.0)) throw ExtractionError("mpp: irradiance must be positive");
    auto power = [&](double v) { return v * iv_current(v, g, m); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = m.v_oc_ref;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double p1 = power(x1);
    double p2 = power(x2);
    while (hi - lo > 1e-9 * m.v_oc_ref) {
        if (p1 < p2) {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + inv_phi * (hi - lo);
            p2 = power(x2);
        } else {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - inv_phi * (hi - lo);
            p1 = power(x1);
        }
    }
    MppPoint out;
    out.v = 0.5 * (lo + hi);
    out.i = iv_current(out.v, g, m);
    out.p = out.v * out.i;
    return out;
}

double daily_charge(std::span<const double> minute, std::span<const double> irradiance,
                    const DiodeModel& model) {
    if (minute.size() != irradiance.size())
        throw AlignmentError("daily_charge: minute/irradiance size mismatch");
    if (minute.size() < 2) return 0.0;

    std::vector<double> current(minute.size(), 0.0);
    for (std::size_t k = 0; k < minute.size(); ++k)
        if (irradiance[k] > 0.0) current[k] = std::max(0.0, mpp(irradiance[k], model).i);

    double acc = 0.0;
    for (std::size_t k = 1; k < minute.size(); ++k)
        acc += 0.5 * (current[k] + current[k - 1]) * (minute[k] - minute[k - 1]);
    return acc / 60.0;
}

DayChargeStats charge_statistics(std::int32_t day, std::span<const double> charges) {
    if (charges.size() < 4)
        throw InsufficientDataError(Stage::pv, "day " + std::to_string(day) + ": " +
                                                   std::to_string(charges.size()) +
                                                   " replicates, need at least 4");
    std::vector<double> sorted(charges.begin(), charges.end());
    std::sort(sorted.begin(), sorted.end());

    DayChargeStats s;
    s.day = day;
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.50);
    s.q3 = quantile_sorted(sorted, 0.75);
    s.whisker_low = sorted.front();
    s.whisker_high = sorted.back();
    const double iqr = s.q3 - s.q1;
    for (double v : sorted)
        if (v < s.q1 - 1.5 * iqr || v > s.q3 + 1.5 * iqr) s.outliers.push_back(v);
    return s;
}

} // namespace solsim
