#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "zenolab/dynamics.hpp"
#include "zenolab/intelligent.hpp"
#include "zenolab/zeno.hpp"

namespace zenolab::cli {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

// Raised when a computed result breaks an invariant the library guarantees.
struct NumericContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json units(const BathParams& bath) {
    return {{"hbar", 1.0}, {"gamma", bath.gamma()}, {"time", "1/gamma"}, {"rate", "gamma"}};
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json direction_json(const Direction& d) {
    return {{"theta", d.theta()}, {"phi", d.phi()}, {"cos_theta", std::cos(d.theta())}};
}

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)), columns_(header_.size()) {}

    void add_row(const std::vector<double>& row) {
        for (std::size_t c = 0; c < columns_.size(); ++c) columns_[c].push_back(row[c]);
    }

    std::string csv() const {
        std::string s;
        for (std::size_t c = 0; c < header_.size(); ++c) s += (c ? "," : "") + header_[c];
        s += '\n';
        const std::size_t rows = columns_.empty() ? 0 : columns_[0].size();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < columns_.size(); ++c) {
                if (c) s += ',';
                s += format_number(columns_[c][r]);
            }
            s += '\n';
        }
        return s;
    }

    json columns_json() const {
        json j = json::object();
        for (std::size_t c = 0; c < header_.size(); ++c) j[header_[c]] = columns_[c];
        return j;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> columns_;
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// CSV goes to the data path with metadata in `<path>.meta.json`; JSON embeds it.
void emit(const RunConfig& cfg, const Table& table, json meta, std::ostream& out) {
    meta["command"] = cfg.command();
    meta["config"] = cfg.resolved();
    meta["units"] = units(cfg.bath());
    if (cfg.format() == OutputFormat::json) {
        write_text(cfg.output(), dump({{"columns", table.columns_json()}, {"meta", meta}}), out);
        return;
    }
    write_text(cfg.output(), table.csv(), out);
    if (!cfg.output().empty()) write_text(cfg.output() + ".meta.json", dump(meta), out);
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
    } else if (j.is_number()) {
        rows.emplace_back(prefix, format_number(j.get<double>()));
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

// ---- direction and state resolution --------------------------------------

struct ResolvedDirection {
    Direction direction;
    std::string kind; // mu1 | mu2 | +z | -z | angles
};

ResolvedDirection resolve_direction(const RunConfig& cfg) {
    const std::string kind = cfg.string("direction", "mu1");
    const bool angles = kind == "angles";
    if (!angles && (cfg.has("theta") || cfg.has("phi")))
        throw ConfigError("config key 'theta'/'phi': only valid with direction = \"angles\"");
    if (kind == "mu1" || kind == "mu2") {
        const ZenoDirections z = zeno_directions(cfg.bath());
        return {kind == "mu1" ? z.mu1 : z.mu2, kind};
    }
    if (kind == "+z") return {Direction(0, 0), kind};
    if (kind == "-z") return {Direction(pi, 0), kind};
    if (angles) {
        if (!cfg.has("theta") || !cfg.has("phi"))
            throw ConfigError("config key 'direction': \"angles\" requires both 'theta' and 'phi'");
        try {
            return {Direction(cfg.number("theta", 0), cfg.number("phi", 0)), kind};
        } catch (const ContractViolation& e) {
            throw ConfigError(std::string("config key 'theta': ") + e.what());
        }
    }
    throw ConfigError("config key 'direction': expected mu1, mu2, +z, -z or angles, got \"" + kind + "\"");
}

struct ResolvedState {
    DensityMatrix rho;
    std::optional<PureState> pure;
    std::string name;
};

ResolvedState resolve_state(const RunConfig& cfg, const ResolvedDirection& dir) {
    const std::string name = cfg.string("state", "zeno-plus");
    const bool bloch = name == "bloch";
    if (!bloch && (cfg.has("bloch_x") || cfg.has("bloch_y") || cfg.has("bloch_z")))
        throw ConfigError("config key 'bloch_x'/'bloch_y'/'bloch_z': only valid with state = \"bloch\"");

    const auto from_pure = [&](const PureState& s) { return ResolvedState{DensityMatrix::from_pure(s), s, name}; };
    if (name == "zeno-plus" || name == "zeno-minus") {
        if (dir.kind != "mu1" && dir.kind != "mu2")
            throw ConfigError("config key 'state': \"" + name +
                              "\" refers to a preferential direction, but direction = \"" + dir.kind + "\"");
        const auto [plus, minus] = eigenstates_mu(dir.direction);
        return from_pure(name == "zeno-plus" ? plus : minus);
    }
    if (name == "excited") return from_pure(PureState::excited());
    if (name == "ground") return from_pure(PureState::ground());
    if (bloch) {
        if (!cfg.has("bloch_x") || !cfg.has("bloch_y") || !cfg.has("bloch_z"))
            throw ConfigError("config key 'state': \"bloch\" requires bloch_x, bloch_y and bloch_z");
        const Bloch v(cfg.number("bloch_x", 0), cfg.number("bloch_y", 0), cfg.number("bloch_z", 0));
        if (v.norm() > 1 + 1e-9) throw ConfigError("config key 'bloch_x': Bloch vector norm exceeds 1");
        ResolvedState r{bloch_to_matrix(v), std::nullopt, name};
        if (std::abs(v.norm() - 1) <= 1e-9) r.pure = eigenstates_mu(Direction::from_vector(v)).first;
        return r;
    }
    throw ConfigError("config key 'state': expected zeno-plus, zeno-minus, excited, ground or bloch, got \"" + name +
                      "\"");
}

// ---- commands --------------------------------------------------------------

void cmd_surface(const RunConfig& cfg, std::ostream& out) {
    const int n_theta = cfg.integer("n_theta", 256);
    const int n_phi = cfg.integer("n_phi", 256);
    if (n_theta < 2) throw ConfigError("config key 'n_theta': must be at least 2");
    if (n_phi < 1) throw ConfigError("config key 'n_phi': must be at least 1");
    const BathParams& bath = cfg.bath();

    const FunctionalSurface surface = scan_functional(bath, n_theta, n_phi);
    Table table({"theta", "phi", "F"});
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) table.add_row({surface.theta(i), surface.phi(j), surface.at(i, j)});

    const auto [g1, g2] = surface_maxima(surface);
    if (g1.value > 1e-9 * bath.gamma())
        throw NumericContractError("surface: F = " + format_number(g1.value) + " > 0 violates F <= 0");

    const ZenoDirections z = zeno_directions(bath);
    json closed = json::array();
    for (const Direction& d : {z.mu1, z.mu2}) {
        json rec = direction_json(d);
        rec["F"] = survival_functional(bath, d);
        closed.push_back(rec);
    }
    json grid = json::array();
    json polished = json::array();
    for (const GridMaximum& g : {g1, g2}) {
        grid.push_back({{"theta", surface.theta(g.i)}, {"phi", surface.phi(g.j)}, {"F", g.value}});
        const Direction p = polish_maximum(bath, Direction(surface.theta(g.i), surface.phi(g.j)));
        json rec = direction_json(p);
        rec["F"] = survival_functional(bath, p);
        polished.push_back(rec);
    }
    json meta = {{"closed_form_maxima", closed},
                 {"grid_maxima", grid},
                 {"polished_maxima", polished},
                 {"degenerate", z.degenerate},
                 {"grid", {{"n_theta", n_theta}, {"n_phi", n_phi}}}};
    emit(cfg, table, meta, out);
}

void cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    const ResolvedDirection dir = resolve_direction(cfg);
    const ResolvedState state = resolve_state(cfg, dir);
    const std::string measure = cfg.string("measure", "direction");
    if (measure != "direction" && measure != "none")
        throw ConfigError("config key 'measure': expected \"direction\" or \"none\", got \"" + measure + "\"");

    std::optional<TimeGrid> grid;
    try {
        grid.emplace(cfg.number("t_start", 0.0), cfg.number("t_end", 10.0), cfg.integer("n_steps", 200));
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("config key 't_end'/'n_steps': ") + e.what());
    }
    IntegratorOptions options;
    options.step = cfg.optional_number("step");
    if (options.step && (!(*options.step > 0) || *options.step > max_stable_step(cfg.bath())))
        throw ConfigError("config key 'step': must lie in (0, " + format_number(max_stable_step(cfg.bath())) + "]");

    const BathParams& bath = cfg.bath();
    const TimeSeries<Bloch> free = evolve_free(bath, state.rho, *grid, options);
    const Bloch mu = dir.direction.unit_vector();

    json meta = {{"direction", direction_json(dir.direction)}, {"state", state.name}, {"measure", measure}};
    std::optional<MeasuredEvolution> measured;
    if (measure == "direction") {
        measured = evolve_measured(bath, dir.direction, state.rho, *grid, options);
        meta["projected"] = measured->projected;
        meta["coefficients"] = {{"alpha", measured->coefficients.alpha}, {"beta", measured->coefficients.beta}};
    }

    Table table(measured ? std::vector<std::string>{"t", "sigma_mu_free", "sigma_mu_measured"}
                         : std::vector<std::string>{"t", "sigma_mu_free"});
    for (std::size_t k = 0; k < free.size(); ++k) {
        if (free.values[k].norm() > 1 + 1e-9)
            throw NumericContractError("evolve: Bloch vector left the unit ball at t = " + format_number(free.times[k]));
        const double f = mu.dot(free.values[k]);
        if (measured) {
            const double m = measured->expectation.values[k];
            if (std::abs(m) > 1 + 1e-9)
                throw NumericContractError("evolve: |<sigma_mu>| > 1 under measurement at t = " +
                                           format_number(free.times[k]));
            table.add_row({free.times[k], f, m});
        } else {
            table.add_row({free.times[k], f});
        }
    }
    emit(cfg, table, meta, out);
}

void cmd_zeno(const RunConfig& cfg, std::ostream& out) {
    const ResolvedDirection dir = resolve_direction(cfg);
    const ResolvedState state = resolve_state(cfg, dir);
    if (!state.pure) throw ConfigError("config key 'state': survival needs a pure state (unit Bloch vector)");
    const int n_traj = cfg.integer("n_traj", 0);
    if (n_traj < 0) throw ConfigError("config key 'n_traj': must be non-negative");
    const int threads = cfg.integer("threads", 0);
    if (threads < 0) throw ConfigError("config key 'threads': must be non-negative");

    std::optional<MeasurementSchedule> sched;
    try {
        sched.emplace(cfg.number("dt", 0.01), cfg.integer("S", 500));
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("config key 'dt'/'S': ") + e.what());
    }

    const BathParams& bath = cfg.bath();
    const PureState& a = *state.pure;
    const SurvivalCurve exact = repeated_measurement_survival(bath, a, *sched);
    const SurvivalCurve first = first_order_survival(bath, a, *sched);
    const SurvivalCurve second = second_order_survival(bath, a, *sched);
    std::optional<SurvivalCurve> mc;
    if (n_traj > 0)
        mc = monte_carlo_survival(bath, a, *sched,
                                  {n_traj, cfg.unsigned_integer("seed", 0), static_cast<unsigned>(threads)});

    std::vector<std::string> header = {"t", "P_exact", "P_first_order", "P_second_order"};
    if (mc) {
        header.push_back("P_mc");
        header.push_back("P_mc_stderr");
    }
    Table table(header);
    for (std::size_t k = 0; k < exact.size(); ++k) {
        const double p = exact.probability[k];
        if (p < 0 || p > 1 || (k > 0 && p > exact.probability[k - 1]))
            throw NumericContractError("zeno: exact survival is not a non-increasing probability at k = " +
                                       std::to_string(k));
        std::vector<double> row = {exact.times[k], p, first.probability[k], second.probability[k]};
        if (mc) {
            row.push_back(mc->probability[k]);
            row.push_back(mc->standard_error[k]);
        }
        table.add_row(row);
    }

    const double rate = survival_rate(bath, a);
    json meta = {{"state", state.name},
                 {"direction", direction_json(dir.direction)},
                 {"schedule", {{"dt", sched->dt()}, {"S", sched->count()}}},
                 {"survival_rate", rate},
                 {"second_order_element", second_order_element(bath, a)},
                 {"step_survival_probability", step_survival_probability(bath, a, sched->dt())},
                 {"fitted_rate_exact", exact.fitted_rate()}};
    if (std::abs(rate) <= 1e-10 * bath.gamma()) meta["second_order_rate"] = second_order_rate(bath, a, sched->dt());
    if (mc) meta["monte_carlo"] = {{"n_traj", n_traj}, {"seed", cfg.unsigned_integer("seed", 0)}};
    emit(cfg, table, meta, out);
}

void cmd_intelligent(const RunConfig& cfg, std::ostream& out) {
    const BathParams& bath = cfg.bath();
    if (!cfg.m_is_maximal())
        throw ConfigError("config key 'M': the single-Lindblad analysis requires M = \"maximal\"");

    json report;
    report["bath"] = {{"gamma", bath.gamma()}, {"N", bath.n()}, {"M", bath.m()}, {"psi", bath.psi()}};
    report["units"] = units(bath);
    const SEigensystem eig = s_eigensystem(bath);
    const SqueezeFrame frame = SqueezeFrame::from_bath(bath);
    report["squeeze_frame"] = {{"r", frame.r}, {"alpha_ratio", frame.alpha_ratio}, {"psi", frame.psi}};
    report["degenerate"] = eig.degenerate;
    report["eigenvalues"] = {{"plus", complex_json(eig.lambda_plus)}, {"minus", complex_json(eig.lambda_minus)}};
    const std::complex<double> lp = s_eigenvalue_plus(bath);
    report["expected_eigenvalues"] = {{"plus", complex_json(lp)}, {"minus", complex_json(-lp)}};

    const Matrix2cd s = lindblad_s_operator(bath);
    const auto state_json = [&](const PureState& v, std::complex<double> lambda) {
        const UncertaintyReport u = uncertainty_product(v, bath.psi());
        return json{{"c_plus", complex_json(v.plus())},
                    {"c_minus", complex_json(v.minus())},
                    {"eigen_residual", (s * v.ket() - lambda * v.ket()).norm()},
                    {"var_j1", u.var_j1},
                    {"var_j2", u.var_j2},
                    {"bound", u.bound},
                    {"saturation_gap", u.saturation_gap}};
    };
    report["eigenstates"] = {{"plus", state_json(eig.plus, eig.lambda_plus)},
                             {"minus", state_json(eig.minus, eig.lambda_minus)}};

    if (eig.degenerate) {
        report["warning"] = "N = 0: S = sigma is nilpotent with the single eigenvector |-> (eigenvalue 0); "
                            "J_-(alpha) is singular at alpha = 1";
    } else {
        report["eigenvalue_error"] =
            std::max(std::abs(eig.lambda_plus - lp), std::abs(eig.lambda_minus + lp));
        const auto [z1, z2] = zeno_states(bath);
        report["zeno_state_fidelity"] = {{"plus_mu1", fidelity(eig.plus, z1)},
                                         {"plus_mu2", fidelity(eig.plus, z2)},
                                         {"minus_mu1", fidelity(eig.minus, z1)},
                                         {"minus_mu2", fidelity(eig.minus, z2)}};
        const FactorizationResiduals res = s_factorization_residuals(bath);
        report["factorization_residuals"] = {{"ladder_form", res.ladder_form}, {"j_minus_form", res.j_minus_form}};
    }

    if (cfg.format() == OutputFormat::json) {
        write_text(cfg.output(), dump(report), out);
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    std::string text = "key,value\n";
    for (const auto& [k, v] : rows) text += k + "," + v + "\n";
    write_text(cfg.output(), text, out);
}

const std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>> commands = {
    {"surface", cmd_surface}, {"evolve", cmd_evolve}, {"zeno", cmd_zeno}, {"intelligent", cmd_intelligent}};

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Total Zeno Effect toolkit for a two-level atom in a squeezed vacuum", "zenolab"};
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format;
    app.add_option("command", command, "surface | evolve | zeno | intelligent")
        ->required()
        ->check(CLI::IsMember({"surface", "evolve", "zeno", "intelligent"}));
    app.add_option("--config", config_path, "flat JSON configuration file");
    app.add_option("--set", overrides, "override a configuration key (key=value)");
    app.add_option("--out", out_path, "output path (default: standard output)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "zenolab: " << e.what() << "\n";
        return config_error;
    }

    try {
        json doc = config_path.empty() ? json::object() : RunConfig::load_file(config_path);
        for (const auto& s : overrides) RunConfig::apply_override(doc, s);
        if (!out_path.empty()) doc["output"] = out_path;
        if (!format.empty()) doc["format"] = format;
        const RunConfig cfg(command, doc);
        commands.at(command)(cfg, out);
        return ok;
    } catch (const ConfigError& e) {
        err << "zenolab: " << e.what() << "\n";
        return config_error;
    } catch (const IoError& e) {
        err << "zenolab: I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const std::exception& e) {
        err << "zenolab: numeric contract violation: " << e.what() << "\n";
        return numeric_contract;
    }
}

} // namespace zenolab::cli
