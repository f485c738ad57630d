#include "qstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qstab/errors.hpp"

namespace qstab {

namespace {

template <class T>
T get(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing key '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad value for '") + key + "': " + e.what());
    }
}

// null encodes an unbounded end.
double get_end(const Json& j) {
    if (j.contains("t_end") && j.at("t_end").is_null()) return kUnbounded;
    return get<double>(j, "t_end");
}

Json end_value(double t) { return std::isfinite(t) ? Json(t) : Json(nullptr); }

template <class T>
std::optional<T> get_opt(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return get<T>(j, key);
}

template <class T>
void put_opt(Json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

Json point_to_json(const BlochPoint& p) { return Json{{"theta", p.theta()}, {"phi", p.phi()}}; }

BlochPoint point_from_json(const Json& j) {
    try {
        return BlochPoint(get<double>(j, "theta"), get<double>(j, "phi"));
    } catch (const ParameterError& e) {
        throw FormatError(e.what());
    }
}

Design design_from_json(const Json& j) {
    Design d;
    d.construction = get<std::string>(j, "construction");
    d.k_fap = get_opt<int>(j, "k_fap");
    d.k_dn = get_opt<int>(j, "k_dn");
    d.n = get_opt<int>(j, "n");
    d.budget_case = get_opt<int>(j, "budget_case");
    d.g = get<double>(j, "g");
    d.omega_rf = get_opt<double>(j, "omega_rf");
    d.phi_fap = get_opt<double>(j, "phi_fap");
    d.t1 = get_opt<double>(j, "t1");
    return d;
}

Json lifting_block() {
    return Json{{"hamiltonian", "-omega0 sz(x)I + omega0 I(x)sz + sum_ij u_ij si(x)sj"},
                {"u_xx", "u_x"},
                {"u_yy", "u_x"},
                {"u_xy", "-u_y"},
                {"u_yx", "u_y"}};
}

} // namespace

Json segment_to_json(const Segment& s) {
    Json j;
    j["kind"] = std::string(segment_kind(s));
    std::visit(
        [&j](const auto& seg) {
            using T = std::decay_t<decltype(seg)>;
            if constexpr (std::is_same_v<T, Resonant>) {
                j["g"] = seg.g;
                j["omega_rf"] = seg.omega_rf;
                j["phi1"] = seg.phi1;
            } else if constexpr (std::is_same_v<T, StaticHold>) {
                j["ux"] = seg.ux;
                j["uy"] = seg.uy;
            } else if constexpr (std::is_same_v<T, Envelope>) {
                j["g"] = seg.g;
                j["n"] = seg.n;
                j["carrier_omega"] = seg.carrier_omega;
                j["carrier_t_ref"] = seg.carrier_t_ref;
                j["sign_y"] = seg.sign_y;
            }
            j["t_start"] = seg.t_start;
            j["t_end"] = end_value(seg.t_end);
        },
        s);
    return j;
}

Segment segment_from_json(const Json& j) {
    const auto kind = get<std::string>(j, "kind");
    const double ts = get<double>(j, "t_start");
    const double te = get_end(j);
    if (kind == "resonant") {
        return Resonant{get<double>(j, "g"), get<double>(j, "omega_rf"), get<double>(j, "phi1"), ts, te};
    }
    if (kind == "static_hold") return StaticHold{get<double>(j, "ux"), get<double>(j, "uy"), ts, te};
    if (kind == "envelope") {
        return Envelope{get<double>(j, "g"), get<int>(j, "n"), get<double>(j, "carrier_omega"),
                        get<double>(j, "carrier_t_ref"), get<int>(j, "sign_y"), ts, te};
    }
    if (kind == "silence") return Silence{ts, te};
    throw FormatError("unknown segment kind '" + kind + "'");
}

Json to_json(const PulseDocument& doc) {
    Json j;
    j["version"] = kPulseFormatVersion;
    j["params"] = Json{{"omega0", doc.params.omega0()}, {"g0", doc.params.g0()}};
    j["segments"] = Json::array();
    for (const auto& s : doc.pulse.segments()) j["segments"].push_back(segment_to_json(s));
    if (doc.synthesis) {
        const SynthesisRecord& r = *doc.synthesis;
        Json s;
        s["initial"] = point_to_json(r.initial);
        s["target"] = point_to_json(r.target);
        s["t0"] = r.t0;
        s["t_f"] = r.t_f;
        s["target_kind"] = to_string(r.target_kind);
        s["control_class"] = to_string(r.control_class);
        s["design"] = design_to_json(r.design);
        put_opt(s, "claimed_bound", r.claimed_bound);
        put_opt(s, "claimed_energy", r.claimed_energy);
        if (r.budgets.ts || r.budgets.es) {
            Json b = Json::object();
            put_opt(b, "Ts", r.budgets.ts);
            put_opt(b, "Es", r.budgets.es);
            s["budgets"] = b;
        }
        j["synthesis"] = s;
    }
    if (doc.lifted) j["lifting"] = lifting_block();
    return j;
}

PulseDocument pulse_document_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("pulse document must be a JSON object");
    const int version = get<int>(j, "version");
    if (version != kPulseFormatVersion) {
        throw FormatError("unsupported pulse format version " + std::to_string(version));
    }
    const Json& p = j.at("params");
    std::optional<SystemParams> params;
    try {
        params.emplace(get<double>(p, "omega0"), get<double>(p, "g0"));
    } catch (const ParameterError& e) {
        throw FormatError(e.what());
    }
    if (!j.contains("segments") || !j.at("segments").is_array()) {
        throw FormatError("missing segment array");
    }
    std::vector<Segment> segments;
    for (const auto& s : j.at("segments")) segments.push_back(segment_from_json(s));
    std::optional<ControlPulse> pulse;
    try {
        pulse.emplace(std::move(segments));
    } catch (const ParameterError& e) {
        throw FormatError(std::string("invalid pulse: ") + e.what());
    }
    PulseDocument doc{*params, std::move(*pulse), std::nullopt, j.contains("lifting")};
    if (j.contains("synthesis")) {
        const Json& s = j.at("synthesis");
        SynthesisRecord r;
        r.initial = point_from_json(s.at("initial"));
        r.target = point_from_json(s.at("target"));
        r.t0 = get<double>(s, "t0");
        r.t_f = get<double>(s, "t_f");
        try {
            r.target_kind = target_kind_from_string(get<std::string>(s, "target_kind"));
            r.control_class = control_class_from_string(get<std::string>(s, "control_class"));
        } catch (const ParameterError& e) {
            throw FormatError(e.what());
        }
        r.design = design_from_json(s.at("design"));
        r.claimed_bound = get_opt<double>(s, "claimed_bound");
        r.claimed_energy = get_opt<double>(s, "claimed_energy");
        if (s.contains("budgets")) {
            r.budgets.ts = get_opt<double>(s.at("budgets"), "Ts");
            r.budgets.es = get_opt<double>(s.at("budgets"), "Es");
        }
        doc.synthesis = r;
    }
    return doc;
}

namespace {

void emit(std::string& out, const Json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%#.17g", v);
        out += buf;
    } else if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(key).dump() + ": ";
            emit(out, value, depth + 1);
        }
        out += "\n" + close_pad + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k > 0) out += ",\n";
            out += pad;
            emit(out, j[k], depth + 1);
        }
        out += "\n" + close_pad + "]";
    } else {
        out += j.dump();
    }
}

} // namespace

std::string dump_json(const Json& j) {
    std::string out;
    emit(out, j, 0);
    out += "\n";
    return out;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed for " + path);
}

PulseDocument make_document(const SynthesisResult& r, const BlochPoint& p0, const BlochPoint& pf,
                            const SystemParams& params, const Budgets& budgets) {
    SynthesisRecord rec{p0,       pf,       r.t0,           r.t_f,           r.target, r.control_class,
                        r.design, r.claimed_bound, r.claimed_energy, budgets};
    return PulseDocument{params, r.pulse, rec, false};
}

PulseDocument make_document(const EntanglerResult& r, const SystemParams& params) {
    const SynthesisResult& eq = r.equivalent;
    Budgets b;
    b.ts = r.budget;
    SynthesisRecord rec{r.initial, r.target, eq.t0,           eq.t_f,           eq.target, eq.control_class,
                        eq.design, r.required_budget, std::nullopt, b};
    return PulseDocument{params, r.lifted.logical(), rec, true};
}

SynthesisResult to_synthesis_result(const PulseDocument& doc) {
    if (!doc.synthesis) throw FormatError("pulse document has no synthesis record");
    const SynthesisRecord& r = *doc.synthesis;
    SynthesisResult out;
    out.pulse = doc.pulse;
    out.t0 = r.t0;
    out.t_f = r.t_f;
    out.target = r.target_kind;
    out.control_class = r.control_class;
    out.design = r.design;
    out.claimed_bound = r.claimed_bound;
    out.claimed_energy = r.claimed_energy;
    return out;
}

EntanglerResult to_entangler_result(const PulseDocument& doc) {
    if (!doc.lifted) throw FormatError("pulse document is not a lifted two-qubit pulse");
    SynthesisResult eq = to_synthesis_result(doc);
    eq.pulse = doc.pulse.scaled(1.0 / kLogicalControlScale);
    eq.claimed_bound.reset();
    const SynthesisRecord& r = *doc.synthesis;
    return EntanglerResult{eq, LiftedPulse(doc.pulse), r.initial, r.target, r.budgets.ts, r.claimed_bound};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    if (traj.empty()) return;
    const bool two = traj.front().state.dimension() == 4;
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    out << "t";
    const int dim = two ? 4 : 2;
    for (int k = 0; k < dim; ++k) out << ",re" << k << ",im" << k;
    out << ",theta,phi";
    if (two) out << ",leakage";
    out << ",ux,uy\n";
    for (const auto& s : traj.samples()) {
        out << s.t;
        for (int k = 0; k < dim; ++k) out << ',' << s.state[k].real() << ',' << s.state[k].imag();
        if (two) {
            const Vector l = logical_amplitudes(s.state);
            const double theta = 2.0 * std::atan2(std::abs(l[1]), std::abs(l[0]));
            const double phi = wrap_phase(std::arg(l[1]) - std::arg(l[0]));
            out << ',' << theta << ',' << phi << ',' << leakage(s.state);
        } else {
            const BlochPoint p = state_to_bloch(s.state);
            out << ',' << p.theta() << ',' << p.phi();
        }
        out << ',' << s.ux << ',' << s.uy << '\n';
    }
    out.precision(old_precision);
}

void write_region_csv(std::ostream& out, const RegionGrid& grid) {
    const auto old_precision = out.precision();
    out << std::setprecision(17) << "theta,phi,stabilizable\n";
    for (int i = 0; i < grid.n_theta(); ++i) {
        for (int j = 0; j < grid.n_phi(); ++j) {
            out << grid.theta(i) << ',' << grid.phi(j) << ',' << (grid.cell(i, j) ? 1 : 0) << '\n';
        }
    }
    out.precision(old_precision);
}

Json report_to_json(const VerificationReport& report) {
    Json j;
    j["overall"] = report.overall;
    j["checks"] = Json::array();
    for (const auto& c : report.checks) {
        Json cj{{"name", c.name},
                {"claimed", c.claimed},
                {"measured", c.measured},
                {"tolerance", c.tolerance},
                {"pass", c.pass}};
        if (!c.note.empty()) cj["note"] = c.note;
        j["checks"].push_back(cj);
    }
    j["provenance"] = report.provenance;
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    RunConfig c;
    c.omega0 = get_opt<double>(j, "omega0");
    c.g0 = get_opt<double>(j, "g0");
    if (j.contains("initial")) c.initial = point_from_json(j.at("initial"));
    if (j.contains("target")) c.target = point_from_json(j.at("target"));
    if (auto cls = get_opt<std::string>(j, "control_class")) {
        try {
            c.control_class = control_class_from_string(*cls);
        } catch (const ParameterError& e) {
            throw FormatError(e.what());
        }
    }
    if (j.contains("budgets")) {
        c.ts = get_opt<double>(j.at("budgets"), "Ts");
        c.es = get_opt<double>(j.at("budgets"), "Es");
    }
    c.n = get_opt<int>(j, "n");
    c.t0 = get_opt<double>(j, "t0");
    c.dt = get_opt<double>(j, "dt");
    c.horizon = get_opt<double>(j, "horizon");
    c.ratio = get_opt<double>(j, "ratio");
    c.n_theta = get_opt<int>(j, "n_theta");
    c.n_phi = get_opt<int>(j, "n_phi");
    return c;
}

} // namespace qstab
