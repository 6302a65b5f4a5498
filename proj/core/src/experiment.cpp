#include "egd/experiment.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "egd/errors.hpp"
#include "egd/expr.hpp"

namespace egd {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
    int column = 0;
    bool used = false;
};

using Section = std::map<std::string, RawValue>;

struct RawFile {
    std::string name;
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
};

[[noreturn]] void fail_at(const RawFile& raw, int line, int column,
                          const std::string& why) {
    throw ConfigError(raw.name + ":" + std::to_string(line) + ":" +
                      std::to_string(column) + ": " + why);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawFile tokenize(const std::string& text, const std::string& name) {
    RawFile raw;
    raw.name = name;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::string current;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                fail_at(raw, line_no, 1, "unterminated section header");
            }
            current = trim(stripped.substr(1, stripped.size() - 2));
            if (current.empty()) fail_at(raw, line_no, 1, "empty section name");
            if (raw.sections.count(current)) {
                fail_at(raw, line_no, 1, "duplicate section [" + current + "]");
            }
            raw.sections[current] = {};
            raw.section_lines[current] = line_no;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail_at(raw, line_no, 1, "expected 'key = value'");
        }
        if (current.empty()) {
            fail_at(raw, line_no, 1, "key outside of any section");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_at(raw, line_no, 1, "empty key");
        if (value.empty()) {
            fail_at(raw, line_no, static_cast<int>(eq) + 2, "empty value");
        }
        if (raw.sections[current].count(key)) {
            fail_at(raw, line_no, 1,
                    "duplicate key '" + key + "' in section [" + current + "]");
        }
        raw.sections[current][key] =
            RawValue{value, line_no, static_cast<int>(eq) + 2, false};
    }
    return raw;
}

class SectionReader {
public:
    SectionReader(RawFile& raw, const std::string& section)
        : raw_(raw), name_(section) {
        auto it = raw_.sections.find(section);
        section_ = it == raw_.sections.end() ? nullptr : &it->second;
    }

    bool present() const { return section_ != nullptr; }

    std::optional<std::string> get_string(const std::string& key) {
        if (!section_) return std::nullopt;
        auto it = section_->find(key);
        if (it == section_->end()) return std::nullopt;
        it->second.used = true;
        return it->second.text;
    }

    std::optional<double> get_double(const std::string& key) {
        auto text = get_string(key);
        if (!text) return std::nullopt;
        const RawValue& rv = section_->at(key);
        const char* begin = text->c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0') {
            fail_at(raw_, rv.line, rv.column, "expected a number, got '" + *text + "'");
        }
        return v;
    }

    std::optional<int> get_int(const std::string& key) {
        auto text = get_string(key);
        if (!text) return std::nullopt;
        const RawValue& rv = section_->at(key);
        const char* begin = text->c_str();
        char* end = nullptr;
        long v = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0') {
            fail_at(raw_, rv.line, rv.column, "expected an integer, got '" + *text + "'");
        }
        return static_cast<int>(v);
    }

    std::optional<std::vector<double>> get_double_list(const std::string& key) {
        auto text = get_string(key);
        if (!text) return std::nullopt;
        const RawValue& rv = section_->at(key);
        std::vector<double> values;
        std::stringstream parts(*text);
        std::string item;
        while (std::getline(parts, item, ',')) {
            std::string token = trim(item);
            const char* begin = token.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (token.empty() || end == begin || *end != '\0') {
                fail_at(raw_, rv.line, rv.column,
                        "expected a comma-separated number list");
            }
            values.push_back(v);
        }
        if (values.empty()) {
            fail_at(raw_, rv.line, rv.column, "empty value list");
        }
        return values;
    }

    void require(const std::string& key, bool got) {
        if (!got) {
            int line = raw_.section_lines.count(name_) ? raw_.section_lines[name_] : 1;
            fail_at(raw_, line, 1,
                    "section [" + name_ + "] is missing required key '" + key + "'");
        }
    }

private:
    RawFile& raw_;
    std::string name_;
    Section* section_;
};

void reject_unknown(const RawFile& raw, const std::set<std::string>& known_sections) {
    for (const auto& [section, keys] : raw.sections) {
        if (!known_sections.count(section)) {
            fail_at(raw, raw.section_lines.at(section), 1,
                    "unknown section [" + section + "]");
        }
        for (const auto& [key, rv] : keys) {
            if (!rv.used) {
                fail_at(raw, rv.line, 1,
                        "unknown key '" + key + "' in section [" + section + "]");
            }
        }
    }
}

void require_section(const RawFile& raw, const std::string& name) {
    if (!raw.sections.count(name)) {
        throw ConfigError(raw.name + ": missing required section [" + name + "]");
    }
}

std::string format_value(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

ExperimentFile ExperimentFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open experiment file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

ExperimentFile ExperimentFile::parse_string(const std::string& text,
                                            const std::string& name) {
    RawFile raw = tokenize(text, name);
    for (const char* section : {"grid", "time", "protocol", "utility", "hjb", "initial"}) {
        require_section(raw, section);
    }

    ExperimentFile config;

    SectionReader grid(raw, "grid");
    {
        auto n = grid.get_int("n");
        grid.require("n", n.has_value());
        config.grid.n = *n;
        config.grid.nz = grid.get_int("nz");
        if (config.grid.n < 2 || (config.grid.nz && *config.grid.nz < 2)) {
            throw ConfigError(name + ": [grid] cell counts must be >= 2");
        }
    }

    SectionReader time(raw, "time");
    {
        auto t_max = time.get_double("t_max");
        time.require("t_max", t_max.has_value());
        config.time.t_max = *t_max;
        config.time.dt = time.get_double("dt").value_or(config.time.dt);
        config.time.sample_every =
            time.get_int("sample_every").value_or(config.time.sample_every);
        config.time.stationary_tol =
            time.get_double("stationary_tol").value_or(config.time.stationary_tol);
        if (!(config.time.dt > 0.0) || config.time.t_max < 0.0 ||
            config.time.sample_every < 1 || !(config.time.stationary_tol > 0.0)) {
            throw ConfigError(name + ": [time] values out of range");
        }
    }

    SectionReader protocol(raw, "protocol");
    {
        auto kind = protocol.get_string("kind");
        protocol.require("kind", kind.has_value());
        config.protocol.kind = *kind;
        config.protocol.w = protocol.get_double("w");
        if (config.protocol.kind != "logit" && config.protocol.kind != "pairwise") {
            throw ConfigError(name +
                              ": [protocol] kind must be 'logit' or 'pairwise'");
        }
        if (config.protocol.kind == "pairwise") {
            if (!config.protocol.w) {
                throw ConfigError(name +
                                  ": [protocol] pairwise requires w (0 = replicator, "
                                  "1 = BNN)");
            }
            if (!(*config.protocol.w >= 0.0) || !(*config.protocol.w <= 1.0)) {
                throw ConfigError(name + ": [protocol] w must be in [0, 1]");
            }
        } else if (config.protocol.w) {
            throw ConfigError(name + ": [protocol] w applies to pairwise only");
        }
    }

    SectionReader utility(raw, "utility");
    {
        auto u_name = utility.get_string("name");
        utility.require("name", u_name.has_value());
        config.utility.name = *u_name;
        config.utility.c = utility.get_double("c");
        config.utility.shift = utility.get_double("shift");
    }

    SectionReader hjb(raw, "hjb");
    {
        auto delta = hjb.get_double("delta");
        hjb.require("delta", delta.has_value());
        auto epsilon = hjb.get_double("epsilon");
        hjb.require("epsilon", epsilon.has_value());
        config.hjb.delta = *delta;
        config.hjb.epsilon = *epsilon;
        config.hjb.chi = hjb.get_double("chi").value_or(config.hjb.chi);
        config.hjb.xi = hjb.get_double("xi").value_or(config.hjb.xi);
        config.hjb.relax = hjb.get_double("relax").value_or(config.hjb.relax);
        config.hjb.tol = hjb.get_double("tol").value_or(config.hjb.tol);
        config.hjb.max_iter = hjb.get_int("max_iter").value_or(config.hjb.max_iter);
        config.hjb.eta_init = hjb.get_double("eta_init").value_or(config.hjb.eta_init);
    }

    SectionReader initial(raw, "initial");
    {
        auto kind = initial.get_string("kind");
        initial.require("kind", kind.has_value());
        config.initial.kind = *kind;
        auto expr = initial.get_string("expr");
        if (config.initial.kind == "uniform") {
            if (expr) {
                throw ConfigError(name + ": [initial] expr applies to pdf_expr only");
            }
        } else if (config.initial.kind == "pdf_expr") {
            initial.require("expr", expr.has_value());
            config.initial.expr = *expr;
            PdfExpr::parse(config.initial.expr);  // syntax check now
        } else {
            throw ConfigError(name +
                              ": [initial] kind must be 'uniform' or 'pdf_expr'");
        }
    }

    SectionReader output(raw, "output");
    if (output.present()) {
        config.output.directory =
            output.get_string("directory").value_or(config.output.directory);
        config.output.prefix = output.get_string("prefix").value_or("");
    }

    SectionReader sweep(raw, "sweep");
    if (sweep.present()) {
        SweepSection s;
        auto parameter = sweep.get_string("parameter");
        sweep.require("parameter", parameter.has_value());
        s.parameter = *parameter;
        auto values = sweep.get_double_list("values");
        sweep.require("values", values.has_value());
        s.values = *values;
        config.sweep = std::move(s);
    }

    reject_unknown(raw, {"grid", "time", "protocol", "utility", "hjb", "initial",
                         "output", "sweep"});

    // Cross-section consistency.
    if (config.is_2d()) {
        if (config.utility.name != "resource2d") {
            throw ConfigError(name + ": [grid] nz set but [utility] is not resource2d");
        }
        if (config.protocol.kind != "logit") {
            throw ConfigError(name + ": 2D runs support the logit protocol only");
        }
    } else if (config.utility.name == "resource2d") {
        throw ConfigError(name + ": [utility] resource2d requires [grid] nz");
    }
    if (config.initial.kind == "pdf_expr") {
        PdfExpr expr = PdfExpr::parse(config.initial.expr);
        if (expr.uses_z() && !config.is_2d()) {
            throw ConfigError(name + ": [initial] expr uses z on a 1D grid");
        }
    }
    if (config.sweep) {
        static const std::set<std::string> sweepable = {
            "epsilon", "delta", "chi", "xi", "dt", "t_max", "c", "shift", "w"};
        if (!sweepable.count(config.sweep->parameter)) {
            throw ConfigError(name + ": [sweep] parameter '" +
                              config.sweep->parameter + "' is not sweepable");
        }
    }
    return config;
}

std::string ExperimentFile::serialize() const {
    std::ostringstream out;
    out << "[grid]\n";
    out << "n = " << grid.n << "\n";
    if (grid.nz) out << "nz = " << *grid.nz << "\n";
    out << "\n[time]\n";
    out << "dt = " << format_value(time.dt) << "\n";
    out << "t_max = " << format_value(time.t_max) << "\n";
    out << "sample_every = " << time.sample_every << "\n";
    out << "stationary_tol = " << format_value(time.stationary_tol) << "\n";
    out << "\n[protocol]\n";
    out << "kind = " << protocol.kind << "\n";
    if (protocol.w) out << "w = " << format_value(*protocol.w) << "\n";
    out << "\n[utility]\n";
    out << "name = " << utility.name << "\n";
    if (utility.c) out << "c = " << format_value(*utility.c) << "\n";
    if (utility.shift) out << "shift = " << format_value(*utility.shift) << "\n";
    out << "\n[hjb]\n";
    out << "delta = " << format_value(hjb.delta) << "\n";
    out << "epsilon = " << format_value(hjb.epsilon) << "\n";
    out << "chi = " << format_value(hjb.chi) << "\n";
    out << "xi = " << format_value(hjb.xi) << "\n";
    out << "relax = " << format_value(hjb.relax) << "\n";
    out << "tol = " << format_value(hjb.tol) << "\n";
    out << "max_iter = " << hjb.max_iter << "\n";
    out << "eta_init = " << format_value(hjb.eta_init) << "\n";
    out << "\n[initial]\n";
    out << "kind = " << initial.kind << "\n";
    if (!initial.expr.empty()) out << "expr = " << initial.expr << "\n";
    out << "\n[output]\n";
    out << "directory = " << output.directory << "\n";
    if (!output.prefix.empty()) out << "prefix = " << output.prefix << "\n";
    if (sweep) {
        out << "\n[sweep]\n";
        out << "parameter = " << sweep->parameter << "\n";
        out << "values = ";
        for (size_t i = 0; i < sweep->values.size(); ++i) {
            if (i) out << ", ";
            out << format_value(sweep->values[i]);
        }
        out << "\n";
    }
    return out.str();
}

SimConfig ExperimentFile::to_sim_config() const {
    SimConfig sim;
    sim.n = grid.n;
    sim.nz = grid.nz.value_or(0);
    sim.dt = time.dt;
    sim.t_max = time.t_max;
    sim.sample_every = time.sample_every;
    sim.stationary_tol = time.stationary_tol;
    sim.protocol = protocol.kind == "logit"
                       ? ProtocolSpec::logit()
                       : ProtocolSpec::pairwise(protocol.w.value_or(0.0));
    sim.utility = make_utility(utility.name, utility.c, utility.shift);
    sim.hjb.delta = hjb.delta;
    sim.hjb.epsilon = hjb.epsilon;
    sim.hjb.chi = hjb.chi;
    sim.hjb.xi = hjb.xi;
    sim.hjb.relax = hjb.relax;
    sim.hjb.tol = hjb.tol;
    sim.hjb.max_iter = hjb.max_iter;
    sim.hjb.eta_init = hjb.eta_init;

    if (initial.kind == "uniform") {
        sim.initial = InitialSpec::uniform();
    } else {
        PdfExpr expr = PdfExpr::parse(initial.expr);
        Grid g = sim.make_grid();
        std::vector<double> values(static_cast<size_t>(g.cell_count()));
        for (int flat = 0; flat < g.cell_count(); ++flat) {
            values[static_cast<size_t>(flat)] =
                expr.eval(g.center_x(flat), g.is_2d() ? g.center_z(flat) : 0.0);
        }
        sim.initial = InitialSpec::from_pdf(std::move(values));
    }
    return sim;
}

ExperimentFile ExperimentFile::with_parameter(const std::string& parameter,
                                              double value) const {
    ExperimentFile out = *this;
    if (parameter == "epsilon") {
        out.hjb.epsilon = value;
    } else if (parameter == "delta") {
        out.hjb.delta = value;
    } else if (parameter == "chi") {
        out.hjb.chi = value;
    } else if (parameter == "xi") {
        out.hjb.xi = value;
    } else if (parameter == "dt") {
        out.time.dt = value;
    } else if (parameter == "t_max") {
        out.time.t_max = value;
    } else if (parameter == "c") {
        out.utility.c = value;
    } else if (parameter == "shift") {
        out.utility.shift = value;
    } else if (parameter == "w") {
        out.protocol.w = value;
    } else {
        throw ConfigError("parameter '" + parameter + "' is not sweepable");
    }
    return out;
}

}  // namespace egd
