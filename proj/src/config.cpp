#include "solfv/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace solfv {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct KeyValue {
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

/// Raw key = value lines with provenance, for line-precise diagnostics.
class Parser {
  public:
    explicit Parser(const std::string& path) : path_(path) {
        std::ifstream in(path);
        if (!in) throw ConfigError(path + ": cannot open config file");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw err_at(lineno, "expected key = value");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw err_at(lineno, "empty key");
            const auto [it, inserted] = kv_.emplace(key, KeyValue{value, lineno});
            if (!inserted) {
                throw err_at(lineno, "duplicate key '" + key + "' (first on line " +
                                         std::to_string(it->second.line) + ")");
            }
        }
    }

    ConfigError err_at(std::size_t line, const std::string& msg) const {
        return ConfigError(path_ + ":" + std::to_string(line) + ": " + msg);
    }

    ConfigError err(const std::string& msg) const {
        return ConfigError(path_ + ": " + msg);
    }

    /// Validation error pinned to the key's line when it was given.
    ConfigError err_key(const std::string& key, const std::string& msg) const {
        const auto it = kv_.find(key);
        if (it != kv_.end()) return err_at(it->second.line, msg);
        return err(msg);
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    const KeyValue* take(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string get_string(const std::string& key, const std::string& def) {
        const KeyValue* kv = take(key);
        return kv ? kv->value : def;
    }

    double get_double(const std::string& key, double def) {
        const KeyValue* kv = take(key);
        if (!kv) return def;
        return parse_double(key, *kv, kv->value);
    }

    double parse_double(const std::string& key, const KeyValue& kv,
                        const std::string& text) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw err_at(kv.line, "key '" + key + "': invalid number '" + text +
                                      "'");
        }
    }

    std::size_t get_size(const std::string& key, std::size_t def) {
        const KeyValue* kv = take(key);
        if (!kv) return def;
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(kv->value, &pos);
            if (pos != kv->value.size()) throw std::invalid_argument("");
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw err_at(kv->line, "key '" + key + "': invalid integer '" +
                                       kv->value + "'");
        }
    }

    bool get_bool(const std::string& key, bool def) {
        const KeyValue* kv = take(key);
        if (!kv) return def;
        const std::string& v = kv->value;
        if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "off" || v == "no") return false;
        throw err_at(kv->line, "key '" + key + "': expected a boolean, got '" +
                                   v + "'");
    }

    template <typename T>
    T get_enum(const std::string& key, T def,
               const std::vector<std::pair<std::string, T>>& table) {
        const KeyValue* kv = take(key);
        if (!kv) return def;
        for (const auto& [name, value] : table) {
            if (kv->value == name) return value;
        }
        std::string options;
        for (const auto& [name, value] : table) {
            if (!options.empty()) options += ", ";
            options += name;
        }
        throw err_at(kv->line, "key '" + key + "': unknown value '" + kv->value +
                                   "' (expected one of: " + options + ")");
    }

    std::vector<double> get_double_list(const std::string& key,
                                        std::vector<double> def) {
        const KeyValue* kv = take(key);
        if (!kv) return def;
        std::vector<double> out;
        std::stringstream ss(kv->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                throw err_at(kv->line, "key '" + key + "': empty list entry");
            }
            out.push_back(parse_double(key, *kv, item));
        }
        if (out.empty()) throw err_at(kv->line, "key '" + key + "': empty list");
        return out;
    }

    std::vector<std::size_t> get_size_list(const std::string& key) {
        const KeyValue* kv = take(key);
        if (!kv) return {};
        std::vector<std::size_t> out;
        std::stringstream ss(kv->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            try {
                std::size_t pos = 0;
                const unsigned long long v = std::stoull(item, &pos);
                if (pos != item.size()) throw std::invalid_argument("");
                out.push_back(static_cast<std::size_t>(v));
            } catch (const std::exception&) {
                throw err_at(kv->line, "key '" + key + "': invalid integer '" +
                                           item + "'");
            }
        }
        if (out.empty()) throw err_at(kv->line, "key '" + key + "': empty list");
        return out;
    }

    void finish() const {
        for (const auto& [key, kv] : kv_) {
            if (!kv.used) throw err_at(kv.line, "unknown key '" + key + "'");
        }
    }

  private:
    std::string path_;
    std::map<std::string, KeyValue> kv_;
};

const std::vector<std::pair<std::string, Geometry>> kGeometries = {
    {"one_sided", Geometry::OneSided},
    {"two_sided", Geometry::TwoSided},
    {"plasma_only", Geometry::PlasmaOnly},
};
const std::vector<std::pair<std::string, SchemeKind>> kSchemes = {
    {"none", SchemeKind::None},
    {"isoardi", SchemeKind::Isoardi},
    {"two_fields", SchemeKind::TwoFields},
    {"optimal", SchemeKind::Optimal},
    {"optimal_two_sided", SchemeKind::OptimalTwoSided},
};
const std::vector<std::pair<std::string, BcKind>> kBcKinds = {
    {"symmetry", BcKind::Symmetry},
    {"periodic", BcKind::Periodic},
    {"exact_dirichlet", BcKind::ExactDirichlet},
    {"asymptotic_outflow", BcKind::AsymptoticOutflow},
};
const std::vector<std::pair<std::string, TwoFieldsForm>> kTwoFieldsForms = {
    {"update_block", TwoFieldsForm::UpdateBlock},
    {"system_10", TwoFieldsForm::System10},
};
const std::vector<std::pair<std::string, ReferenceKind>> kReferences = {
    {"analytic", ReferenceKind::Analytic},
    {"numerical_eps", ReferenceKind::NumericalEps},
};

template <typename T>
std::string enum_name(T value, const std::vector<std::pair<std::string, T>>& table) {
    for (const auto& [name, v] : table) {
        if (v == value) return name;
    }
    return "?";
}

void validate_run(const RunConfig& c, const Parser& p) {
    if (!(c.epsilon > 0.0)) throw p.err_key("epsilon", "epsilon must be > 0");
    if (!(c.m0 > 0.0 && c.m0 <= 1.0)) {
        throw p.err_key("m0", "m0 must be in (0, 1]");
    }
    if (!(c.stationary_S > 0.0)) {
        throw p.err_key("stationary_s", "stationary_s must be > 0");
    }
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) {
        throw p.err_key("cfl", "cfl must be in (0, 1]");
    }
    if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) {
        throw p.err_key("t_end", "t_end must be finite and >= 0");
    }
    if (c.n_cells != 0 && c.n_cells < 4) {
        throw p.err_key("n_cells", "n_cells must be at least 4");
    }
    if (!(c.blow_up_threshold > 1.0)) {
        throw p.err_key("blow_up_threshold", "blow_up_threshold must be > 1");
    }

    const bool two_sided = c.geometry == Geometry::TwoSided;
    if (c.scheme == SchemeKind::OptimalTwoSided && !two_sided) {
        throw p.err_key("scheme",
                        "optimal_two_sided requires geometry = two_sided");
    }
    if (two_sided && c.scheme != SchemeKind::None &&
        c.scheme != SchemeKind::OptimalTwoSided) {
        throw p.err_key("scheme",
                        "two_sided geometry supports scheme = none or "
                        "optimal_two_sided");
    }
    if ((c.case_name == "two_sided_regular") != two_sided) {
        throw p.err_key("case", two_sided
                                    ? "two_sided geometry requires case = "
                                      "two_sided_regular"
                                    : "case two_sided_regular requires geometry "
                                      "= two_sided");
    }
    if (two_sided) {
        if (c.bc_left != BcKind::Periodic || c.bc_right != BcKind::Periodic) {
            throw p.err("two_sided geometry requires periodic boundaries");
        }
    } else if (c.bc_left == BcKind::Periodic || c.bc_right == BcKind::Periodic) {
        throw p.err("periodic boundaries require geometry = two_sided");
    }
    if (c.bc_left == BcKind::AsymptoticOutflow) {
        throw p.err_key("bc_left", "asymptotic_outflow applies to the right "
                                   "boundary only");
    }
    if (c.bc_right == BcKind::AsymptoticOutflow &&
        (c.geometry != Geometry::OneSided || c.scheme != SchemeKind::Optimal ||
         c.case_name != "regular")) {
        throw p.err("asymptotic_outflow requires one_sided geometry, the "
                    "optimal scheme, and case = regular");
    }
    if (c.case_name != "regular" && c.case_name != "isoardi" &&
        c.case_name != "stationary" && c.case_name != "two_sided_regular") {
        throw p.err_key("case", "unknown case '" + c.case_name + "'");
    }
}

RunConfig parse_run(Parser& p) {
    RunConfig c;
    c.geometry = p.get_enum("geometry", Geometry::OneSided, kGeometries);
    switch (c.geometry) {
        case Geometry::OneSided:
            c.bc_left = BcKind::Symmetry;
            c.bc_right = BcKind::ExactDirichlet;
            break;
        case Geometry::TwoSided:
            c.bc_left = BcKind::Periodic;
            c.bc_right = BcKind::Periodic;
            c.case_name = "two_sided_regular";
            c.scheme = SchemeKind::OptimalTwoSided;
            break;
        case Geometry::PlasmaOnly:
            c.bc_left = BcKind::ExactDirichlet;
            c.bc_right = BcKind::ExactDirichlet;
            c.scheme = SchemeKind::None;
            break;
    }
    c.scheme = p.get_enum("scheme", c.scheme, kSchemes);
    c.case_name = p.get_string("case", c.case_name);
    c.epsilon = p.get_double("epsilon", c.epsilon);
    c.m0 = p.get_double("m0", c.m0);
    c.stationary_S = p.get_double("stationary_s", c.stationary_S);
    c.n_cells = p.get_size("n_cells", c.n_cells);
    c.cfl = p.get_double("cfl", c.cfl);
    c.t_end = p.get_double("t_end", c.t_end);
    c.bc_left = p.get_enum("bc_left", c.bc_left, kBcKinds);
    c.bc_right = p.get_enum("bc_right", c.bc_right, kBcKinds);
    c.out_dir = p.get_string("out_dir", c.out_dir);
    c.paper_literal_rusanov =
        p.get_bool("paper_literal_rusanov", c.paper_literal_rusanov);
    c.two_fields_form =
        p.get_enum("two_fields_form", c.two_fields_form, kTwoFieldsForms);
    c.strict_paper_stepping =
        p.get_bool("strict_paper_stepping", c.strict_paper_stepping);
    c.use_muscl = p.get_bool("use_muscl", c.use_muscl);
    c.snapshot_every = p.get_size("snapshot_every", c.snapshot_every);
    c.blow_up_threshold = p.get_double("blow_up_threshold", c.blow_up_threshold);
    validate_run(c, p);
    return c;
}

SweepConfig parse_sweep(Parser& p) {
    SweepConfig s;
    s.base = parse_run(p);
    s.eps_list = p.get_double_list(
        "eps_list", {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7});
    s.reference = p.get_enum("reference", s.reference, kReferences);
    s.eps_ref = p.get_double("eps_ref", s.eps_ref);
    if (s.eps_list.size() < 3) {
        throw p.err_key("eps_list", "eps_list needs at least 3 entries");
    }
    for (std::size_t i = 0; i < s.eps_list.size(); ++i) {
        if (!(s.eps_list[i] > 0.0)) {
            throw p.err_key("eps_list", "eps_list entries must be > 0");
        }
        if (i > 0 && !(s.eps_list[i] < s.eps_list[i - 1])) {
            throw p.err_key("eps_list", "eps_list must be strictly descending");
        }
    }
    if (!(s.eps_ref > 0.0)) throw p.err_key("eps_ref", "eps_ref must be > 0");
    return s;
}

}  // namespace

GeometrySpec geometry_spec(Geometry g) {
    switch (g) {
        case Geometry::OneSided:
            return {0.0, 0.5, LimiterSpec{0.4, 0.5, false}, 500};
        case Geometry::TwoSided:
            return {-0.5, 0.5, LimiterSpec{-0.1, 0.1, true}, 1000};
        case Geometry::PlasmaOnly:
            return {0.0, 0.4, std::nullopt, 400};
    }
    return {};
}

std::size_t effective_n_cells(const RunConfig& config) {
    return config.n_cells != 0 ? config.n_cells
                               : geometry_spec(config.geometry).default_n_cells;
}

RunConfig parse_run_config(const std::string& path) {
    Parser p(path);
    RunConfig c = parse_run(p);
    p.finish();
    return c;
}

SweepConfig parse_sweep_config(const std::string& path) {
    Parser p(path);
    SweepConfig s = parse_sweep(p);
    p.finish();
    return s;
}

MeshStudyConfig parse_mesh_study_config(const std::string& path) {
    Parser p(path);
    MeshStudyConfig m;
    m.base = parse_run(p);
    m.mesh_list = p.get_size_list("mesh_list");
    if (m.mesh_list.size() < 3) {
        throw p.err_key("mesh_list", "mesh_list needs at least 3 entries");
    }
    for (std::size_t i = 0; i < m.mesh_list.size(); ++i) {
        if (m.mesh_list[i] < 4) {
            throw p.err_key("mesh_list", "mesh sizes must be at least 4");
        }
        if (i > 0 && m.mesh_list[i] <= m.mesh_list[i - 1]) {
            throw p.err_key("mesh_list", "mesh_list must be strictly increasing");
        }
    }
    p.finish();
    return m;
}

EtaStudyConfig parse_eta_study_config(const std::string& path) {
    Parser p(path);
    EtaStudyConfig e;
    e.sweep = parse_sweep(p);
    e.eta_list = p.get_double_list("eta_list", {});
    if (e.eta_list.empty()) {
        throw p.err("eta_list is required for an eta study");
    }
    for (double eta : e.eta_list) {
        if (!(eta > 0.0 && eta < 1.0)) {
            throw p.err_key("eta_list", "eta values must lie in (0, 1)");
        }
    }
    p.finish();
    return e;
}

std::string geometry_name(Geometry g) { return enum_name(g, kGeometries); }
std::string scheme_name(SchemeKind k) { return enum_name(k, kSchemes); }
std::string bc_name(BcKind k) { return enum_name(k, kBcKinds); }

std::string serialize_run_config(const RunConfig& c) {
    std::ostringstream out;
    out << "geometry = " << geometry_name(c.geometry) << "\n"
        << "scheme = " << scheme_name(c.scheme) << "\n"
        << "case = " << c.case_name << "\n"
        << "epsilon = " << fmt_double(c.epsilon) << "\n"
        << "m0 = " << fmt_double(c.m0) << "\n"
        << "stationary_s = " << fmt_double(c.stationary_S) << "\n"
        << "n_cells = " << c.n_cells << "\n"
        << "cfl = " << fmt_double(c.cfl) << "\n"
        << "t_end = " << fmt_double(c.t_end) << "\n"
        << "bc_left = " << bc_name(c.bc_left) << "\n"
        << "bc_right = " << bc_name(c.bc_right) << "\n"
        << "out_dir = " << c.out_dir << "\n"
        << "paper_literal_rusanov = "
        << (c.paper_literal_rusanov ? "true" : "false") << "\n"
        << "two_fields_form = "
        << (c.two_fields_form == TwoFieldsForm::UpdateBlock ? "update_block"
                                                            : "system_10")
        << "\n"
        << "strict_paper_stepping = "
        << (c.strict_paper_stepping ? "true" : "false") << "\n"
        << "use_muscl = " << (c.use_muscl ? "true" : "false") << "\n"
        << "snapshot_every = " << c.snapshot_every << "\n"
        << "blow_up_threshold = " << fmt_double(c.blow_up_threshold) << "\n";
    return out.str();
}

}  // namespace solfv
