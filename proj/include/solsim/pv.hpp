#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace solsim {

// Datasheet values at standard test conditions (1000 W/m^2, 25 C).
struct PanelSpec {
    double stc_power_w = 0.0;
    double ptc_power_w = 0.0;
    double noct_c = 0.0;
    double power_per_area_wm2 = 0.0;
    double peak_efficiency_pct = 0.0;
    int n_cells = 0;
    double i_mp_a = 0.0;
    double v_mp_v = 0.0;
    double i_sc_a = 0.0;
    double v_oc_v = 0.0;
};

// Solartec S60PC-250.
PanelSpec reference_panel();

// JSON file with the PanelSpec field names; electrical fields are
// required, the informational ones default to the reference panel.
PanelSpec load_panel_spec(const std::filesystem::path& path);

// Throws on inconsistent electrical data.
void validate_panel_spec(const PanelSpec& spec);

// Five-parameter single-diode model,
//   I = I_ph - I_0 [exp((V + I R_s)/(n N V_t)) - 1] - (V + I R_s)/R_sh,
// with the ideality factor n held at 1.3 and V_t at its 25 C value.
struct DiodeModel {
    double i_ph_ref = 0.0; // photocurrent at 1000 W/m^2, A
    double i_0 = 0.0;      // diode saturation current, A
    double n = 1.3;
    double r_s = 0.0;  // series resistance, ohm
    double r_sh = 0.0; // shunt resistance, ohm
    int n_cells = 0;
    double v_oc_ref = 0.0; // open-circuit voltage at reference, for bracketing

    double modified_ideality() const; // a = n * n_cells * V_t
};

// Solves the four remaining parameters against the datasheet anchors
// (short circuit, open circuit, MPP location, zero power slope at MPP)
// with a damped Newton iteration.
DiodeModel extract_diode_model(const PanelSpec& spec);

// The same panel repeated in series: voltages scale, current does not.
DiodeModel series_string(const DiodeModel& panel, int count);

// Unique root of the implicit diode equation at voltage v and irradiance
// g; photocurrent scales linearly with g / 1000.
double iv_current(double v, double g, const DiodeModel& model);

struct MppPoint {
    double v = 0.0;
    double i = 0.0;
    double p = 0.0;
};

// Golden-section maximum of V * I(V) over [0, open-circuit voltage].
MppPoint mpp(double g, const DiodeModel& model);

// Trapezoidal time integral of the MPP current over an irradiance curve
// sampled on a uniform minute grid; ampere-hours.
double daily_charge(std::span<const double> minute, std::span<const double> irradiance,
                    const DiodeModel& model);

struct DayChargeStats {
    std::int32_t day = 0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;  // whiskers span the full data range
    double whisker_high = 0.0;
    std::vector<double> outliers; // beyond 1.5 IQR from the quartiles
};

// Requires at least 4 replicates.
DayChargeStats charge_statistics(std::int32_t day, std::span<const double> charges);

} // namespace solsim
