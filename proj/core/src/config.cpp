#include "relstable/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace relstable {

namespace {

struct KeyValue {
    std::string value;
    bool used = false;
};

using Table = std::map<std::string, KeyValue>;  // "section.key" -> value

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Table tokenize(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (table.count(full))
            throw ConfigError("duplicate key: " + full);
        table[full] = {value, false};
    }
    return table;
}

class Reader {
public:
    explicit Reader(Table table) : table_(std::move(table)) {}

    bool has(const std::string& key) const { return table_.count(key) > 0; }

    std::string str(const std::string& key) {
        auto it = table_.find(key);
        if (it == table_.end()) throw ConfigError("missing required key: " + key);
        it->second.used = true;
        return it->second.value;
    }
    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }

    double number(const std::string& key) { return parse_number(key, str(key)); }
    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }
    long integer(const std::string& key) {
        const std::string v = str(key);
        long out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            throw ConfigError(key + ": expected an integer, got '" + v + "'");
        return out;
    }
    long integer_or(const std::string& key, long fallback) {
        return has(key) ? integer(key) : fallback;
    }
    bool boolean_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = str(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError(key + ": expected true|false");
    }
    std::vector<double> grid(const std::string& key) {
        const std::string v = str(key);
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos <= v.size()) {
            const auto next = v.find(',', pos);
            const std::string tok =
                trim(v.substr(pos, next == std::string::npos ? next : next - pos));
            if (!tok.empty()) out.push_back(parse_number(key, tok));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (out.empty()) throw ConfigError(key + ": empty list");
        return out;
    }
    Point point(const std::string& key) { return grid(key); }

    void check_all_used() const {
        for (const auto& [key, kv] : table_)
            if (!kv.used) throw ConfigError("unknown key: " + key);
    }

private:
    static double parse_number(const std::string& key, const std::string& v) {
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            throw ConfigError(key + ": expected a number, got '" + v + "'");
        return out;
    }

    Table table_;
};

ModelParams read_model(Reader& r) {
    ModelParams p;
    p.d = static_cast<int>(r.integer_or("model.d", 1));
    if (p.d < 1) throw ConfigError("model.d: must be >= 1");
    p.alpha = r.number_or("model.alpha", 1.0);
    if (!(p.alpha > 0.0 && p.alpha < 2.0))
        throw ConfigError("model.alpha: must lie in the open interval (0, 2)");
    p.m = r.number_or("model.m", 0.0);
    if (!(p.m >= 0.0)) throw ConfigError("model.m: must be >= 0");
    return p;
}

McConfig read_mc(Reader& r) {
    McConfig mc;
    if (!r.has("mc.seed"))
        throw ConfigError("mc.seed: required (runs must be reproducible, no wall-clock default)");
    mc.seed = static_cast<std::uint64_t>(r.integer("mc.seed"));
    mc.n_samples = r.integer_or("mc.n_samples", 10000);
    if (mc.n_samples < 1) throw ConfigError("mc.n_samples: must be >= 1");
    mc.grid_steps = static_cast<int>(r.integer_or("mc.grid_steps", 64));
    if (mc.grid_steps < 1) throw ConfigError("mc.grid_steps: must be >= 1");
    mc.batch_size = r.integer_or("mc.batch_size", 4096);
    if (mc.batch_size < 1) throw ConfigError("mc.batch_size: must be >= 1");
    return mc;
}

Domain read_domain(Reader& r, int model_d) {
    const std::string kind = r.str("domain.kind");
    const auto dim = [&]() {
        return static_cast<int>(r.integer_or("domain.dim", model_d));
    };
    if (kind == "full-space") return Domain::full_space(dim());
    if (kind == "ball") return Domain::ball(r.point("domain.center"), r.number("domain.radius"));
    if (kind == "annulus")
        return Domain::annulus(r.point("domain.center"), r.number("domain.r_in"),
                               r.number("domain.r_out"));
    if (kind == "half-space") return Domain::half_space(dim(), r.number_or("domain.level", 0.0));
    if (kind == "half-space-like")
        return Domain::half_space_like(dim(), r.number("domain.height"),
                                       r.number("domain.bump_radius"));
    if (kind == "ball-complement")
        return Domain::ball_complement(r.point("domain.center"), r.number("domain.radius"));
    if (kind == "intervals") {
        const std::string text = r.str("domain.intervals");
        std::vector<std::pair<double, double>> iv;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto next = text.find(';', pos);
            const std::string tok =
                trim(text.substr(pos, next == std::string::npos ? next : next - pos));
            if (!tok.empty()) {
                const auto comma = tok.find(',');
                if (comma == std::string::npos)
                    throw ConfigError("domain.intervals: expected 'a,b' pairs separated by ';'");
                double a = 0.0, b = 0.0;
                auto ra = std::from_chars(tok.data(), tok.data() + comma, a);
                auto rb = std::from_chars(tok.data() + comma + 1, tok.data() + tok.size(), b);
                if (ra.ec != std::errc() || rb.ec != std::errc())
                    throw ConfigError("domain.intervals: bad number in '" + tok + "'");
                iv.emplace_back(a, b);
            }
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        return Domain::interval_union(std::move(iv));
    }
    throw ConfigError("domain.kind: unknown kind '" + kind +
                      "' (full-space|ball|annulus|half-space|half-space-like|intervals|ball-complement)");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    Reader r(tokenize(text));
    RunConfig cfg;
    cfg.command = r.str("command");
    const std::set<std::string> commands{"levy",  "kernel",   "simulate", "estimate",
                                         "sweep", "exit-check", "report"};
    if (!commands.count(cfg.command))
        throw ConfigError("command: unknown command '" + cfg.command + "'");

    cfg.params = read_model(r);
    cfg.mc = read_mc(r);

    cfg.out_dir = r.str_or("output.dir", ".");
    cfg.csv_name = r.str_or("output.csv", "records.csv");
    cfg.json_name = r.str_or("output.json", "report.json");
    cfg.svg_name = r.str_or("output.svg", "plot.svg");

    if (r.has("domain.kind")) cfg.domain = read_domain(r, cfg.params.d);
    if (cfg.domain && cfg.domain->dim() != cfg.params.d)
        throw ConfigError("domain: dimension differs from model.d");

    if (cfg.command == "levy") {
        cfg.levy_r_grid = r.grid("levy.r_grid");
        for (double v : cfg.levy_r_grid)
            if (!(v > 0.0)) throw ConfigError("levy.r_grid: radii must be > 0");
    } else if (cfg.command == "kernel") {
        cfg.kernel_t_grid = r.grid("kernel.t_grid");
        cfg.kernel_r_grid = r.grid("kernel.r_grid");
        for (double v : cfg.kernel_t_grid)
            if (!(v > 0.0)) throw ConfigError("kernel.t_grid: times must be > 0");
        for (double v : cfg.kernel_r_grid)
            if (!(v >= 0.0)) throw ConfigError("kernel.r_grid: radii must be >= 0");
    } else if (cfg.command == "simulate") {
        cfg.sim_horizon = r.number_or("simulate.horizon", 1.0);
        if (!(cfg.sim_horizon > 0.0)) throw ConfigError("simulate.horizon: must be > 0");
        cfg.sim_n_grid = static_cast<int>(r.integer_or("simulate.n_grid", 64));
        if (cfg.sim_n_grid < 1) throw ConfigError("simulate.n_grid: must be >= 1");
        cfg.sim_n_paths = r.integer_or("simulate.n_paths", 1);
        if (cfg.sim_n_paths < 1) throw ConfigError("simulate.n_paths: must be >= 1");
        cfg.sim_sampler = r.str_or("simulate.sampler", "subordination");
        if (cfg.sim_sampler != "subordination" && cfg.sim_sampler != "thinned")
            throw ConfigError("simulate.sampler: expected subordination|thinned");
        cfg.sim_jump_cut = r.number_or("simulate.jump_cut", 0.05);
        if (!(cfg.sim_jump_cut > 0.0)) throw ConfigError("simulate.jump_cut: must be > 0");
        if (r.has("simulate.start")) cfg.sim_start = r.point("simulate.start");
    } else if (cfg.command == "estimate") {
        if (!cfg.domain) throw ConfigError("estimate: requires a [domain] section");
        cfg.est_quantity = r.str("estimate.quantity");
        const std::set<std::string> qs{"kernel", "survival", "green", "lambda1"};
        if (!qs.count(cfg.est_quantity))
            throw ConfigError("estimate.quantity: expected kernel|survival|green|lambda1");
        cfg.est_t = r.number_or("estimate.t", 1.0);
        if (r.has("estimate.x")) cfg.est_x = r.point("estimate.x");
        if (r.has("estimate.y")) cfg.est_y = r.point("estimate.y");
        if ((cfg.est_quantity == "kernel" || cfg.est_quantity == "survival") &&
            !(cfg.est_t > 0.0))
            throw ConfigError("estimate.t: must be > 0");
        if (cfg.est_quantity != "lambda1" && !cfg.est_x)
            throw ConfigError("estimate.x: required for this quantity");
        if ((cfg.est_quantity == "kernel" || cfg.est_quantity == "green") && !cfg.est_y)
            throw ConfigError("estimate.y: required for this quantity");
    } else if (cfg.command == "sweep") {
        if (!cfg.domain) throw ConfigError("sweep: requires a [domain] section");
        SweepConfig sc;
        sc.tag = theorem_tag_from_string(r.str("sweep.theorem"));
        sc.domain = *cfg.domain;
        sc.alpha = cfg.params.alpha;
        sc.m_grid = r.has("sweep.m_grid") ? r.grid("sweep.m_grid")
                                          : std::vector<double>{cfg.params.m};
        if (r.has("sweep.t_grid")) sc.t_grid = r.grid("sweep.t_grid");
        sc.pairs_per_stratum = static_cast<int>(r.integer_or("sweep.pairs_per_stratum", 20));
        sc.mc = cfg.mc;
        sc.max_rel_se = r.number_or("sweep.max_rel_se", 0.25);
        sc.cap_c = r.number_or("sweep.cap_c", 200.0);
        sc.c2_inner = r.number_or("sweep.c2_inner", 1.0);
        sc.fit_c2 = r.boolean_or("sweep.fit_c2", true);
        sc.axis = r.str_or("sweep.axis", "dist");
        try {
            sc.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep: ") + e.what());
        }
        cfg.sweep = std::move(sc);
    } else if (cfg.command == "exit-check") {
        ExitCheckConfig ec;
        ec.d = cfg.params.d;
        ec.alpha = cfg.params.alpha;
        ec.A = r.number_or("exit_check.A", 1.0);
        ec.B = r.number_or("exit_check.B", 0.25);
        ec.m_grid = r.has("exit_check.m_grid") ? r.grid("exit_check.m_grid")
                                               : std::vector<double>{cfg.params.m};
        ec.r_grid = r.has("exit_check.r_grid") ? r.grid("exit_check.r_grid")
                                               : std::vector<double>{1.0};
        ec.gamma_floor = r.number_or("exit_check.gamma_floor", 1e-4);
        ec.gamma_cap = r.number_or("exit_check.gamma_cap", 0.5);
        ec.mc = cfg.mc;
        try {
            ec.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("exit_check: ") + e.what());
        }
        cfg.exit_check = std::move(ec);
    } else if (cfg.command == "report") {
        cfg.report_input_csv = r.str("report.input_csv");
        cfg.report_cap_c = r.number_or("report.cap_c", 200.0);
        cfg.report_axis = r.str_or("report.axis", "dist");
        if (cfg.report_axis != "t" && cfg.report_axis != "dist" && cfg.report_axis != "delta")
            throw ConfigError("report.axis: expected t|dist|delta");
    }

    r.check_all_used();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace relstable
