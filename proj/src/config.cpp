#include "spinmeas/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace spinmeas::config {

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line;
};

using Section = std::vector<Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"", {"preset", "preset_parameter"}},
        {"observables", {"a", "b", "a_theta", "a_phi", "b_theta", "b_phi"}},
        {"state", {"theta", "phi"}},
        {"path", {"kind", "theta_oa", "phi_start", "phi_end", "samples", "axis"}},
        {"apparatus", {"mode", "efficiency", "jitter", "counts", "replicates", "seed", "threads"}},
        {"output", {"format", "directory", "stem"}},
    };
    return s;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

class Sections {
public:
    explicit Sections(std::map<std::string, Section> data) : data_(std::move(data)) {}

    const Entry* find(const std::string& section, const std::string& key) const {
        auto it = data_.find(section);
        if (it == data_.end()) return nullptr;
        for (const auto& e : it->second) {
            if (e.key == key) return &e;
        }
        return nullptr;
    }

    std::vector<const Entry*> all(const std::string& section, const std::string& key) const {
        std::vector<const Entry*> out;
        auto it = data_.find(section);
        if (it == data_.end()) return out;
        for (const auto& e : it->second) {
            if (e.key == key) out.push_back(&e);
        }
        return out;
    }

private:
    std::map<std::string, Section> data_;
};

double angle_at(const Entry& e) {
    try {
        return parse_angle(e.value);
    } catch (const InvalidInput& ex) {
        throw ConfigError(e.line, e.key + ": " + ex.what());
    }
}

double number_at(const Entry& e) {
    const auto v = to_double(e.value);
    if (!v) throw ConfigError(e.line, e.key + ": expected a number, got '" + e.value + "'");
    return *v;
}

long long integer_at(const Entry& e) {
    long long v = 0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) throw ConfigError(e.line, e.key + ": expected an integer, got '" + e.value + "'");
    return v;
}

UnitAxis vector_at(const Entry& e) {
    std::istringstream in(e.value);
    std::vector<double> xs;
    std::string tok;
    while (in >> tok) {
        const auto v = to_double(tok);
        if (!v) throw ConfigError(e.line, e.key + ": '" + tok + "' is not a number");
        xs.push_back(*v);
    }
    if (xs.size() != 3) throw ConfigError(e.line, e.key + ": expected three components");
    try {
        return UnitAxis::normalized(Eigen::Vector3d(xs[0], xs[1], xs[2]));
    } catch (const InvalidInput&) {
        throw ConfigError(e.line, e.key + ": axis cannot be normalized");
    }
}

std::map<std::string, Section> split(std::string_view text) {
    std::map<std::string, Section> out;
    out[""];
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().count(current) || current.empty()) {
                throw ConfigError(line_no, "unknown section [" + current + "]");
            }
            out[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
        if (e.key.empty()) throw ConfigError(line_no, "missing key");
        if (e.value.empty()) throw ConfigError(line_no, "missing value for '" + e.key + "'");
        const auto& allowed = schema().at(current);
        if (!allowed.count(e.key)) {
            const std::string where = current.empty() ? "top level" : "[" + current + "]";
            throw ConfigError(line_no, "unknown key '" + e.key + "' in " + where);
        }
        if (e.key != "axis") {
            for (const auto& prev : out[current]) {
                if (prev.key == e.key) {
                    throw ConfigError(line_no, "duplicate key '" + e.key + "' (first given on line " +
                                                   std::to_string(prev.line) + ")");
                }
            }
        }
        out[current].push_back(std::move(e));
    }
    return out;
}

UnitAxis resolve_axis(const Sections& s, const std::string& name, const std::optional<UnitAxis>& fallback,
                      bool& overridden) {
    const Entry* vec = s.find("observables", name);
    const Entry* th = s.find("observables", name + "_theta");
    const Entry* ph = s.find("observables", name + "_phi");
    if (vec && (th || ph)) {
        throw ConfigError((th ? th : ph)->line, "axis '" + name + "' given both as a vector and as angles");
    }
    if (vec) {
        overridden = true;
        return vector_at(*vec);
    }
    if (th || ph) {
        if (!th || !ph) {
            throw ConfigError((th ? th : ph)->line, "axis '" + name + "' needs both " + name + "_theta and " + name +
                                                        "_phi");
        }
        overridden = true;
        return UnitAxis::from_angles(angle_at(*th), angle_at(*ph));
    }
    if (!fallback) throw ConfigError(0, "missing required axis '" + name + "' in [observables]");
    return *fallback;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : InvalidInput(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

double parse_angle(std::string_view text) {
    text = trim(text);
    double scale = 0.0;
    std::string_view number;
    if (text.size() > 3 && text.substr(text.size() - 3) == "deg") {
        scale = std::numbers::pi / 180.0;
        number = trim(text.substr(0, text.size() - 3));
    } else if (text.size() > 3 && text.substr(text.size() - 3) == "rad") {
        scale = 1.0;
        number = trim(text.substr(0, text.size() - 3));
    } else {
        throw InvalidInput("angle '" + std::string(text) + "' needs an explicit 'deg' or 'rad' suffix");
    }
    const auto v = to_double(number);
    if (!v) throw InvalidInput("angle '" + std::string(text) + "' is not a number");
    return *v * scale;
}

RunConfig parse_config(std::string_view text) {
    const Sections s(split(text));
    RunConfig rc;
    auto note_default = [&](const std::string& section, const std::string& key) {
        if (!s.find(section, key)) rc.defaulted.push_back(section + "." + key);
    };

    // Preset or explicit observables.
    std::optional<double> preset_param;
    if (const Entry* p = s.find("", "preset_parameter")) preset_param = angle_at(*p);
    const Entry* preset_entry = s.find("", "preset");
    if (preset_entry) {
        try {
            rc.scenario = sweep::preset(preset_entry->value, preset_param);
        } catch (const InvalidInput& ex) {
            throw ConfigError(preset_entry->line, ex.what());
        }
    } else if (preset_param) {
        throw ConfigError(s.find("", "preset_parameter")->line, "preset_parameter given without a preset");
    }
    sweep::ScenarioConfig& sc = rc.scenario;

    bool observables_overridden = false;
    const std::optional<UnitAxis> a_default = preset_entry ? std::optional<UnitAxis>(sc.a) : std::nullopt;
    const std::optional<UnitAxis> b_default = preset_entry ? std::optional<UnitAxis>(sc.b) : std::nullopt;
    sc.a = resolve_axis(s, "a", a_default, observables_overridden);
    sc.b = resolve_axis(s, "b", b_default, observables_overridden);
    if (!preset_entry) sc.name = "custom";
    if (observables_overridden) sc.family = sweep::Family::custom;

    // State.
    const Entry* st = s.find("state", "theta");
    const Entry* sp = s.find("state", "phi");
    if (st || sp) {
        sc.psi = SpinState::from_angles(st ? angle_at(*st) : 0.0, sp ? angle_at(*sp) : 0.0);
        if (sc.family == sweep::Family::standard) sc.family = sweep::Family::psi;
    } else if (!preset_entry) {
        rc.defaulted.push_back("state.theta");
        rc.defaulted.push_back("state.phi");
    }

    // Path.
    const bool preset_latitude = sc.path.kind == sweep::PathKind::latitude;
    const Entry* kind = s.find("path", "kind");
    const auto axes = s.all("path", "axis");
    if (kind) {
        if (kind->value == "equator") {
            sc.path.kind = sweep::PathKind::equator;
        } else if (kind->value == "latitude") {
            sc.path.kind = sweep::PathKind::latitude;
        } else if (kind->value == "custom") {
            sc.path.kind = sweep::PathKind::custom;
        } else {
            throw ConfigError(kind->line, "unknown path kind '" + kind->value + "'");
        }
    } else if (!axes.empty()) {
        throw ConfigError(axes.front()->line, "axis entries require 'kind = custom'");
    }
    const Entry* theta_oa = s.find("path", "theta_oa");
    if (sc.path.kind == sweep::PathKind::equator && theta_oa) {
        throw ConfigError(theta_oa->line, "theta_oa conflicts with an equator path");
    }
    if (sc.path.kind != sweep::PathKind::custom && !axes.empty()) {
        throw ConfigError(axes.front()->line, "axis entries conflict with a " +
                                                  std::string(to_string(sc.path.kind)) + " path");
    }
    if (sc.path.kind == sweep::PathKind::custom) {
        for (const char* k : {"theta_oa", "phi_start", "phi_end", "samples"}) {
            if (const Entry* e = s.find("path", k)) {
                throw ConfigError(e->line, std::string(k) + " conflicts with a custom path");
            }
        }
        if (axes.size() < 2) throw ConfigError(kind ? kind->line : 0, "custom path needs at least two axis entries");
        sc.path.axes.clear();
        for (const Entry* e : axes) sc.path.axes.push_back(vector_at(*e));
        sc.samples = static_cast<int>(axes.size());
    } else {
        if (theta_oa) sc.path.theta_oa = angle_at(*theta_oa);
        if (sc.path.kind == sweep::PathKind::latitude && !theta_oa && !preset_latitude) {
            throw ConfigError(kind ? kind->line : 0, "latitude path requires theta_oa");
        }
        if (const Entry* e = s.find("path", "phi_start")) sc.path.phi_start = angle_at(*e);
        if (const Entry* e = s.find("path", "phi_end")) sc.path.phi_end = angle_at(*e);
        if (const Entry* e = s.find("path", "samples")) {
            const long long n = integer_at(*e);
            if (n < 2) throw ConfigError(e->line, "samples must be at least 2");
            sc.samples = static_cast<int>(n);
        }
        note_default("path", "samples");
    }

    // Apparatus.
    if (const Entry* e = s.find("apparatus", "mode")) {
        if (e->value == "exact") {
            sc.mode = sweep::Mode::exact;
        } else if (e->value == "three_state") {
            sc.mode = sweep::Mode::three_state_exact;
        } else if (e->value == "monte_carlo") {
            sc.mode = sweep::Mode::monte_carlo;
        } else {
            throw ConfigError(e->line, "unknown mode '" + e->value + "'");
        }
    }
    if (const Entry* e = s.find("apparatus", "efficiency")) {
        sc.imperfections.efficiency = number_at(*e);
        if (!(sc.imperfections.efficiency > 0.0 && sc.imperfections.efficiency <= 1.0)) {
            throw ConfigError(e->line, "efficiency must lie in (0, 1]");
        }
    }
    if (const Entry* e = s.find("apparatus", "jitter")) {
        sc.imperfections.angle_jitter_sigma = angle_at(*e);
        if (sc.imperfections.angle_jitter_sigma < 0.0) throw ConfigError(e->line, "jitter must be non-negative");
    }
    if (const Entry* e = s.find("apparatus", "counts")) {
        sc.counts_per_setting = number_at(*e);
        if (!(sc.counts_per_setting > 0.0)) throw ConfigError(e->line, "counts must be positive");
    }
    if (const Entry* e = s.find("apparatus", "replicates")) {
        const long long n = integer_at(*e);
        if (n < 2) throw ConfigError(e->line, "replicates must be at least 2");
        sc.replicates = static_cast<int>(n);
    }
    if (const Entry* e = s.find("apparatus", "seed")) {
        const long long n = integer_at(*e);
        if (n < 0) throw ConfigError(e->line, "seed must be non-negative");
        sc.imperfections.rng_seed = static_cast<std::uint64_t>(n);
    }
    if (const Entry* e = s.find("apparatus", "threads")) {
        const long long n = integer_at(*e);
        if (n < 1) throw ConfigError(e->line, "threads must be at least 1");
        sc.threads = static_cast<unsigned>(n);
    }
    for (const char* k : {"mode", "efficiency", "jitter", "counts", "replicates", "seed"}) note_default("apparatus", k);

    // Output.
    if (const Entry* e = s.find("output", "format")) {
        if (e->value == "csv") {
            rc.output.format = Format::csv;
        } else if (e->value == "json") {
            rc.output.format = Format::json;
        } else {
            throw ConfigError(e->line, "unknown output format '" + e->value + "'");
        }
    }
    if (const Entry* e = s.find("output", "directory")) rc.output.directory = e->value;
    if (const Entry* e = s.find("output", "stem")) rc.output.stem = e->value;
    for (const char* k : {"format", "directory", "stem"}) note_default("output", k);

    try {
        sc.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidInput& ex) {
        throw ConfigError(0, ex.what());
    }
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

std::string_view to_string(sweep::Mode m) {
    switch (m) {
        case sweep::Mode::exact:
            return "exact";
        case sweep::Mode::three_state_exact:
            return "three_state";
        case sweep::Mode::monte_carlo:
            return "monte_carlo";
    }
    return "unknown";
}

std::string_view to_string(sweep::PathKind k) {
    switch (k) {
        case sweep::PathKind::equator:
            return "equator";
        case sweep::PathKind::latitude:
            return "latitude";
        case sweep::PathKind::custom:
            return "custom";
    }
    return "unknown";
}

nlohmann::json to_json(const RunConfig& rc) {
    using nlohmann::json;
    const auto& sc = rc.scenario;
    auto vec = [](const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); };
    const UnitAxis r = sc.psi.direction();
    json path = {{"kind", to_string(sc.path.kind)}, {"samples", sc.samples}};
    if (sc.path.kind == sweep::PathKind::custom) {
        json axes = json::array();
        for (const auto& ax : sc.path.axes) axes.push_back(vec(ax.vec()));
        path["axes"] = axes;
    } else {
        path["theta_oa_rad"] = sc.path.kind == sweep::PathKind::equator ? std::numbers::pi / 2.0 : sc.path.theta_oa;
        path["phi_start_rad"] = sc.path.phi_start;
        path["phi_end_rad"] = sc.path.phi_end;
    }
    return json{
        {"scenario", sc.name},
        {"family_parameter_rad", sc.family_parameter},
        {"observables", {{"a", vec(sc.a.vec())}, {"b", vec(sc.b.vec())}}},
        {"state", {{"bloch", vec(r.vec())}, {"theta_rad", r.polar()}, {"phi_rad", r.azimuth()}}},
        {"path", path},
        {"apparatus",
         {{"mode", to_string(sc.mode)},
          {"efficiency", sc.imperfections.efficiency},
          {"jitter_rad", sc.imperfections.angle_jitter_sigma},
          {"counts_per_setting", sc.counts_per_setting},
          {"replicates", sc.replicates},
          {"seed", sc.imperfections.rng_seed}}},
        {"output", {{"format", to_string(rc.output.format)}, {"directory", rc.output.directory}, {"stem", rc.output.stem}}},
        {"defaulted", rc.defaulted},
    };
}

}  // namespace spinmeas::config
