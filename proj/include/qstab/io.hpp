#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "qstab/propagator.hpp"
#include "qstab/stabilizability.hpp"
#include "qstab/synthesis.hpp"
#include "qstab/two_qubit.hpp"
#include "qstab/verifier.hpp"

namespace qstab {

using Json = nlohmann::ordered_json;

inline constexpr int kPulseFormatVersion = 1;

/// Everything needed to re-verify a synthesized pulse without re-synthesis.
struct SynthesisRecord {
    BlochPoint initial;
    BlochPoint target;
    double t0 = 0.0;
    double t_f = 0.0;
    TargetKind target_kind = TargetKind::Point;
    ControlClass control_class = ControlClass::Bounded;
    Design design;
    std::optional<double> claimed_bound;
    std::optional<double> claimed_energy;
    Budgets budgets;
};

/// Serialized pulse. For lifted (two-qubit) pulses the segments hold the
/// logical controls, params are the physical (omega0, g0), and the synthesis
/// record refers to the logical Bloch sphere.
struct PulseDocument {
    SystemParams params;
    ControlPulse pulse;
    std::optional<SynthesisRecord> synthesis;
    bool lifted = false;
};

Json segment_to_json(const Segment& s);
Segment segment_from_json(const Json& j);

Json to_json(const PulseDocument& doc);
/// Throws FormatError on missing keys, wrong types or an unknown version.
PulseDocument pulse_document_from_json(const Json& j);

/// Two-space indented dump. Doubles are printed with 17 significant digits
/// and a decimal point, so parse followed by dump reproduces the text byte
/// for byte; infinities (unbounded segment ends) are written as null.
std::string dump_json(const Json& j);
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

PulseDocument make_document(const SynthesisResult& r, const BlochPoint& p0, const BlochPoint& pf,
                            const SystemParams& params, const Budgets& budgets = {});
PulseDocument make_document(const EntanglerResult& r, const SystemParams& params);

/// Rebuilds the synthesis result from a document; throws FormatError if the
/// document carries no synthesis record.
SynthesisResult to_synthesis_result(const PulseDocument& doc);
/// Rebuilds an entangler result (logical pulse scaled back to the
/// equivalent problem) from a lifted document.
EntanglerResult to_entangler_result(const PulseDocument& doc);

/// Columns t, re/im of each amplitude, theta, phi, ux, uy. Two-qubit
/// trajectories use the logical Bloch angles and add a leakage column.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Columns theta, phi, stabilizable (0/1).
void write_region_csv(std::ostream& out, const RegionGrid& grid);

Json report_to_json(const VerificationReport& report);

/// Optional run settings loaded from a JSON file. Command-line flags
/// override any value present here.
struct RunConfig {
    std::optional<double> omega0;
    std::optional<double> g0;
    std::optional<BlochPoint> initial;
    std::optional<BlochPoint> target;
    std::optional<ControlClass> control_class;
    std::optional<double> ts;
    std::optional<double> es;
    std::optional<int> n;
    std::optional<double> t0;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<double> ratio;
    std::optional<int> n_theta;
    std::optional<int> n_phi;
};

RunConfig run_config_from_json(const Json& j);

} // namespace qstab
