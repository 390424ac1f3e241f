#include "sac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sac/csv.hpp"
#include "sac_presets.hpp"

namespace sac {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view key) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view key) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("key '" + std::string(key) + "': expected true or false, got '" + std::string(text) + "'");
}

double number(std::string_view text, std::string_view key) {
    try {
        return parse_number(text);
    } catch (const ConfigError&) {
        throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(text) + "'");
    }
}

SchemeType scheme_of(std::string_view text) {
    if (auto s = parse_scheme_type(text)) return *s;
    throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

LawChoice law_of(std::string_view text) {
    if (auto l = parse_law_choice(text)) return *l;
    throw ConfigError("unknown timestep law '" + std::string(text) + "'");
}

NoiseKind noise_of(std::string_view text) {
    if (text == "trace-class") return NoiseKind::TraceClass;
    if (text == "white") return NoiseKind::White;
    throw ConfigError("unknown noise kind '" + std::string(text) + "'");
}

using Setter = std::function<void(StudyConfig&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        const auto real = [&t](const char* key, double StudyConfig::*field) {
            t[key] = [field, key](StudyConfig& c, std::string_view v) { c.*field = number(v, key); };
        };
        const auto flag = [&t](const char* key, bool StudyConfig::*field) {
            t[key] = [field, key](StudyConfig& c, std::string_view v) { c.*field = parse_bool(v, key); };
        };
        t["study.name"] = [](StudyConfig& c, std::string_view v) { c.name = std::string(v); };
        t["study.modes"] = [](StudyConfig& c, std::string_view v) { c.modes = parse_integer<Index>(v, "modes"); };
        real("study.horizon", &StudyConfig::horizon);
        t["study.samples"] = [](StudyConfig& c, std::string_view v) {
            c.samples = parse_integer<std::size_t>(v, "samples");
        };
        t["study.seed"] = [](StudyConfig& c, std::string_view v) { c.seed = parse_integer<std::uint64_t>(v, "seed"); };
        t["study.refinement"] = [](StudyConfig& c, std::string_view v) {
            c.refinement = parse_integer<int>(v, "refinement");
        };
        t["study.schemes"] = [](StudyConfig& c, std::string_view v) {
            c.schemes.clear();
            for (auto item : split_list(v)) c.schemes.push_back(scheme_of(item));
        };
        t["study.laws"] = [](StudyConfig& c, std::string_view v) {
            c.laws.clear();
            for (auto item : split_list(v)) c.laws.push_back(law_of(item));
        };
        t["study.deltas"] = [](StudyConfig& c, std::string_view v) {
            c.deltas.clear();
            for (auto item : split_list(v)) c.deltas.push_back(number(item, "deltas"));
        };
        t["study.initial_mode"] = [](StudyConfig& c, std::string_view v) {
            c.initial.mode = parse_integer<Index>(v, "initial_mode");
        };
        t["study.initial_amplitude"] = [](StudyConfig& c, std::string_view v) {
            c.initial.amplitude = number(v, "initial_amplitude");
        };
        flag("study.share_paths", &StudyConfig::share_paths);
        flag("study.paper_literal_fallback", &StudyConfig::paper_literal_fallback);
        real("study.stability_ceiling", &StudyConfig::stability_ceiling);
        t["study.max_steps"] = [](StudyConfig& c, std::string_view v) {
            c.max_steps = parse_integer<std::size_t>(v, "max_steps");
        };

        t["noise.kind"] = [](StudyConfig& c, std::string_view v) { c.noise_kind = noise_of(v); };
        real("noise.beta", &StudyConfig::noise_beta);
        real("noise.amplitude", &StudyConfig::noise_amplitude);

        t["drift.a3"] = [](StudyConfig& c, std::string_view v) { c.drift.a3 = number(v, "a3"); };
        t["drift.a2"] = [](StudyConfig& c, std::string_view v) { c.drift.a2 = number(v, "a2"); };
        t["drift.a1"] = [](StudyConfig& c, std::string_view v) { c.drift.a1 = number(v, "a1"); };
        t["drift.a0"] = [](StudyConfig& c, std::string_view v) { c.drift.a0 = number(v, "a0"); };

        real("timestep.phi", &StudyConfig::phi);
        real("timestep.zeta", &StudyConfig::zeta);
        real("timestep.xi", &StudyConfig::xi);
        real("timestep.q0", &StudyConfig::q0);
        real("timestep.tau_min", &StudyConfig::tau_min);
        flag("timestep.norm_of_projected_drift", &StudyConfig::norm_of_projected_drift);

        t["trace.scheme"] = [](StudyConfig& c, std::string_view v) { c.trace.scheme = scheme_of(v); };
        t["trace.law"] = [](StudyConfig& c, std::string_view v) { c.trace.law = law_of(v); };
        t["trace.delta"] = [](StudyConfig& c, std::string_view v) { c.trace.delta = number(v, "trace.delta"); };
        t["trace.path"] = [](StudyConfig& c, std::string_view v) {
            c.trace.path = parse_integer<std::uint32_t>(v, "trace.path");
        };

        t["spatial.modes"] = [](StudyConfig& c, std::string_view v) {
            c.spatial.modes.clear();
            for (auto item : split_list(v)) c.spatial.modes.push_back(parse_integer<Index>(item, "spatial.modes"));
        };
        t["spatial.reference_modes"] = [](StudyConfig& c, std::string_view v) {
            c.spatial.reference_modes = parse_integer<Index>(v, "spatial.reference_modes");
        };
        t["spatial.delta"] = [](StudyConfig& c, std::string_view v) { c.spatial.delta = number(v, "spatial.delta"); };
        t["spatial.scheme"] = [](StudyConfig& c, std::string_view v) { c.spatial.scheme = scheme_of(v); };
        return t;
    }();
    return table;
}

const std::set<std::string> kSections{"study", "noise", "drift", "timestep", "trace", "spatial"};

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
    return out;
}

}  // namespace

double parse_number(std::string_view text) {
    text = trim(text);
    if (text.starts_with("2^")) {
        const auto e = parse_integer<int>(text.substr(2), "exponent");
        return std::ldexp(1.0, e);
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
        throw ConfigError("expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

StudyConfig parse_config(std::string_view text) {
    StudyConfig cfg;
    std::string section;
    bool skipping = false;
    std::vector<std::string> unknown;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            skipping = section == "manifest";
            if (!skipping && !kSections.contains(section)) unknown.push_back("[" + section + "]");
            continue;
        }
        if (skipping) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            if (kSections.contains(section)) unknown.push_back(key);
            continue;
        }
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        it->second(cfg, value);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config entries:";
        for (const auto& u : unknown) msg += " " + u;
        throw ConfigError(msg);
    }
    return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_config_text(const StudyConfig& c) {
    std::ostringstream os;
    const auto b = [](bool v) { return v ? "true" : "false"; };
    os << "[study]\n"
       << "name = " << c.name << '\n'
       << "modes = " << c.modes << '\n'
       << "horizon = " << format_double(c.horizon) << '\n'
       << "samples = " << c.samples << '\n'
       << "seed = " << c.seed << '\n'
       << "refinement = " << c.refinement << '\n'
       << "schemes = ";
    for (std::size_t i = 0; i < c.schemes.size(); ++i) os << (i ? ", " : "") << to_string(c.schemes[i]);
    os << "\nlaws = ";
    for (std::size_t i = 0; i < c.laws.size(); ++i) os << (i ? ", " : "") << c.laws[i].label();
    os << "\ndeltas = " << join_numbers(c.deltas) << '\n'
       << "initial_mode = " << c.initial.mode << '\n'
       << "initial_amplitude = " << format_double(c.initial.amplitude) << '\n'
       << "share_paths = " << b(c.share_paths) << '\n'
       << "paper_literal_fallback = " << b(c.paper_literal_fallback) << '\n'
       << "stability_ceiling = " << format_double(c.stability_ceiling) << '\n'
       << "max_steps = " << c.max_steps << "\n\n"
       << "[noise]\n"
       << "kind = " << to_string(c.noise_kind) << '\n'
       << "beta = " << format_double(c.noise_beta) << '\n'
       << "amplitude = " << format_double(c.noise_amplitude) << "\n\n"
       << "[drift]\n"
       << "a3 = " << format_double(c.drift.a3) << '\n'
       << "a2 = " << format_double(c.drift.a2) << '\n'
       << "a1 = " << format_double(c.drift.a1) << '\n'
       << "a0 = " << format_double(c.drift.a0) << "\n\n"
       << "[timestep]\n"
       << "phi = " << format_double(c.phi) << '\n'
       << "zeta = " << format_double(c.zeta) << '\n'
       << "xi = " << format_double(c.xi) << '\n'
       << "q0 = " << format_double(c.q0) << '\n'
       << "tau_min = " << format_double(c.tau_min) << '\n'
       << "norm_of_projected_drift = " << b(c.norm_of_projected_drift) << "\n\n"
       << "[trace]\n"
       << "scheme = " << to_string(c.trace.scheme) << '\n'
       << "law = " << c.trace.law.label() << '\n'
       << "delta = " << format_double(c.trace.delta) << '\n'
       << "path = " << c.trace.path << "\n\n"
       << "[spatial]\n"
       << "modes = ";
    for (std::size_t i = 0; i < c.spatial.modes.size(); ++i) os << (i ? ", " : "") << c.spatial.modes[i];
    os << "\nreference_modes = " << c.spatial.reference_modes << '\n'
       << "delta = " << format_double(c.spatial.delta) << '\n'
       << "scheme = " << to_string(c.spatial.scheme) << '\n';
    return os.str();
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : presets::kAll) names.emplace_back(p.name);
    return names;
}

std::string_view preset_text(std::string_view name) {
    for (const auto& p : presets::kAll) {
        if (p.name == name) return p.text;
    }
    std::string msg = "unknown preset '" + std::string(name) + "' (available:";
    for (const auto& n : preset_names()) msg += " " + n;
    throw ConfigError(msg + ")");
}

StudyConfig load_preset(std::string_view name) { return parse_config(preset_text(name)); }

}  // namespace sac
