// Command line front end.  Subcommands map one-to-one onto the library
// surface: density / charfun / moments evaluate exact quantities on grids,
// sample runs the Monte Carlo oracle, validate runs the quality gates,
// tail fits the moment growth exponent, and figure emits data files for
// the standard plots.  All output is deterministic given the flags
// (including seeds); timings go only to JSON summaries and stderr.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numerical accuracy failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deepprior/deepprior.hpp"
#include "deepprior/validation.hpp"

namespace {

using nlohmann::ordered_json;
using namespace deepprior;

int g_exit = 0;

// ---------------------------------------------------------------- parsing

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse ") + what + ": '" + s + "'");
    }
}

int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("cannot parse ") + what + ": '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;
    bool log_spaced = false;
};

GridSpec parse_grid(const std::string& text, bool default_log) {
    const auto parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4) {
        throw ConfigError("grid must be min:max:points[:lin|:log], got '" +
                          text + "'");
    }
    GridSpec g;
    g.lo = parse_double(parts[0], "grid min");
    g.hi = parse_double(parts[1], "grid max");
    g.points = parse_int(parts[2], "grid points");
    g.log_spaced = default_log;
    if (parts.size() == 4) {
        if (parts[3] == "lin") {
            g.log_spaced = false;
        } else if (parts[3] == "log") {
            g.log_spaced = true;
        } else {
            throw ConfigError("grid spacing must be lin or log, got '" +
                              parts[3] + "'");
        }
    }
    if (g.points < 1 || g.points > 1000000) {
        throw ConfigError("grid points must be in [1, 1000000]");
    }
    if (g.points > 1 && !(g.hi > g.lo)) {
        throw ConfigError("grid max must exceed min");
    }
    if (g.log_spaced && !(g.lo > 0.0)) {
        throw ConfigError("log grid requires min > 0");
    }
    return g;
}

std::vector<double> make_grid(const GridSpec& g) {
    std::vector<double> out(g.points);
    if (g.points == 1) {
        out[0] = g.lo;
        return out;
    }
    if (g.log_spaced) {
        const double la = std::log(g.lo), lb = std::log(g.hi);
        for (int i = 0; i < g.points; ++i) {
            out[i] = std::exp(la + (lb - la) * i / (g.points - 1.0));
        }
    } else {
        for (int i = 0; i < g.points; ++i) {
            out[i] = g.lo + (g.hi - g.lo) * i / (g.points - 1.0);
        }
    }
    return out;
}

std::vector<int> parse_width_list(const std::string& text) {
    std::vector<int> w;
    for (const auto& p : split(text, ',')) {
        w.push_back(parse_int(p, "width"));
    }
    if (w.empty()) throw ConfigError("empty width list");
    return w;
}

// ------------------------------------------------------------- spec flags

struct SpecOpts {
    std::vector<int> widths;
    int out_width = 0;
    int depth = 0;
    std::vector<double> sigma;
    std::string kappa_mode = "explicit";
    double kappa = 1.0;
    std::string activation = "linear";
    double input_norm = 1.0;
};

void add_spec_options(CLI::App* cmd, SpecOpts& o) {
    cmd->add_option("--widths", o.widths,
                    "layer widths n_1..n_d, output layer last (or hidden "
                    "widths when --out-width is given)")
        ->delimiter(',')
        ->required();
    cmd->add_option("--out-width", o.out_width,
                    "output layer width, appended to --widths");
    cmd->add_option("--depth", o.depth,
                    "total layer count; with a single --widths value and "
                    "--out-width this replicates the hidden width");
    auto* sigma =
        cmd->add_option("--sigma", o.sigma,
                        "per-layer weight standard deviations (a single "
                        "value is replicated to every layer)")
            ->delimiter(',');
    auto* kmode =
        cmd->add_option("--kappa-mode", o.kappa_mode,
                        "how to pick the scale: unit-linear | unit-relu | "
                        "explicit (default explicit)")
            ->check(CLI::IsMember({"unit-linear", "unit-relu", "explicit"}));
    auto* kappa = cmd->add_option(
        "--kappa", o.kappa, "kappa for --kappa-mode explicit (default 1)");
    sigma->excludes(kmode);
    sigma->excludes(kappa);
    cmd->add_option("--activation", o.activation, "linear | relu")
        ->check(CLI::IsMember({"linear", "relu"}));
    cmd->add_option("--input-norm", o.input_norm,
                    "norm of the fixed input (default 1); the effective "
                    "kappa scales with it")
        ->check(CLI::PositiveNumber);
}

NetworkSpec build_spec(const SpecOpts& o) {
    std::vector<int> widths = o.widths;
    if (widths.empty()) throw ConfigError("--widths is required");
    if (o.depth > 0 && widths.size() == 1 && o.out_width > 0) {
        widths.assign(static_cast<std::size_t>(o.depth - 1), o.widths[0]);
        widths.push_back(o.out_width);
    } else {
        if (o.out_width > 0) widths.push_back(o.out_width);
        if (o.depth > 0 && static_cast<int>(widths.size()) != o.depth) {
            throw ConfigError("--depth=" + std::to_string(o.depth) +
                              " does not match the " +
                              std::to_string(widths.size()) +
                              " assembled layer widths");
        }
    }
    const Activation act =
        o.activation == "relu" ? Activation::relu : Activation::linear;
    if (!o.sigma.empty()) {
        NetworkSpec spec;
        spec.widths = std::move(widths);
        spec.activation = act;
        spec.input_norm = o.input_norm;
        spec.weight_std =
            o.sigma.size() == 1
                ? std::vector<double>(spec.widths.size(), o.sigma[0])
                : o.sigma;
        spec.validate();
        return spec;
    }
    KappaMode mode = KappaMode::explicit_kappa;
    if (o.kappa_mode == "unit-linear") mode = KappaMode::unit_variance_linear;
    if (o.kappa_mode == "unit-relu") mode = KappaMode::unit_variance_relu;
    NetworkSpec spec = make_spec(widths, act, mode, o.kappa);
    spec.input_norm = o.input_norm;
    spec.validate();
    return spec;
}

struct TruncOpts {
    std::string mode = "product";
    double threshold = 0x1p-52;
};

void add_trunc_options(CLI::App* cmd, TruncOpts& t) {
    cmd->add_option("--trunc-mode", t.mode,
                    "mixture truncation: none | per-factor | product")
        ->check(CLI::IsMember({"none", "per-factor", "product"}));
    cmd->add_option("--trunc-threshold", t.threshold,
                    "weight threshold for mixture truncation (default 2^-52)")
        ->check(CLI::NonNegativeNumber);
}

MixtureConfig mixture_config(const TruncOpts& t) {
    MixtureConfig m;
    if (t.mode == "none") {
        m.mode = TruncationMode::none;
    } else if (t.mode == "per-factor") {
        m.mode = TruncationMode::per_factor;
    } else {
        m.mode = TruncationMode::product;
    }
    m.threshold = t.threshold;
    return m;
}

// ----------------------------------------------------------------- output

struct OutStream {
    std::ofstream file;
    std::ostream* os = nullptr;

    explicit OutStream(const std::string& path) {
        if (path.empty() || path == "-") {
            os = &std::cout;
        } else {
            file.open(path, std::ios::binary);
            if (!file) throw ConfigError("cannot open output file: " + path);
            os = &file;
        }
    }
};

std::string join_ints(const std::vector<int>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

const char* activation_name(const NetworkSpec& spec) {
    return spec.activation == Activation::relu ? "relu" : "linear";
}

void write_spec_meta(CsvWriter& w, const NetworkSpec& spec) {
    w.meta("widths", join_ints(spec.widths, ','));
    w.meta("activation", activation_name(spec));
    w.meta("input_norm", spec.input_norm);
    w.meta("kappa", prior_constants(spec).kappa);
}

ordered_json spec_json(const NetworkSpec& spec) {
    ordered_json j;
    j["widths"] = spec.widths;
    j["weight_std"] = spec.weight_std;
    j["input_norm"] = spec.input_norm;
    j["activation"] = activation_name(spec);
    j["kappa"] = prior_constants(spec).kappa;
    return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    OutStream os(path);
    *os.os << j.dump(2) << "\n";
}

// ----------------------------------------------------------- density table

struct DensityTable {
    NetworkSpec spec;
    bool has_mixture = false;
    double atom_mass = 0.0;
    double continuous_mass = 0.0;
    double discarded_mass = 0.0;
    std::string trunc_mode;
    double trunc_threshold = 0.0;
    bool with_edgeworth = true;

    struct Row {
        double r = 0.0;
        double exact = std::numeric_limits<double>::quiet_NaN();
        double gauss = std::numeric_limits<double>::quiet_NaN();
        double edge = std::numeric_limits<double>::quiet_NaN();
        bool edge_negative = false;
        std::string error;  // empty, or divergent | accuracy | domain
    };
    std::vector<Row> rows;
};

DensityTable compute_density_table(const NetworkSpec& spec,
                                   const ReLUMixture* mix,
                                   const std::vector<double>& grid,
                                   const ContourConfig& ccfg,
                                   bool with_edgeworth) {
    DensityTable t;
    t.spec = spec;
    t.with_edgeworth = with_edgeworth;
    if (mix) {
        t.has_mixture = true;
        t.atom_mass = mix->atom_mass;
        t.continuous_mass = mix->continuous_mass();
        t.discarded_mass = mix->discarded_mass;
    }
    const auto ws = WidthScaledSpec::from_spec(spec);
    t.rows.reserve(grid.size());
    for (double r : grid) {
        DensityTable::Row row;
        row.r = r;
        // Failures are recorded per row so one bad point cannot sink a
        // whole table.
        try {
            const DensityValue dv = mix ? density_relu(spec, r, *mix, ccfg)
                                        : density_linear(spec, r, ccfg);
            if (dv.divergent) {
                row.error = "divergent";
            } else {
                row.exact = dv.value;
            }
        } catch (const AccuracyError&) {
            row.error = "accuracy";
        } catch (const DivergenceError&) {
            row.error = "divergent";
        } catch (const DomainError&) {
            row.error = "domain";
        }
        row.gauss = gaussian_limit_density(ws, r);
        if (with_edgeworth) {
            const auto ev = edgeworth_density(ws, r);
            row.edge = ev.value;
            row.edge_negative = ev.negative;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void density_meta(CsvWriter& w, const DensityTable& t) {
    write_spec_meta(w, t.spec);
    if (t.has_mixture) {
        w.meta("atom_mass", t.atom_mass);
        w.meta("continuous_mass", t.continuous_mass);
        w.meta("discarded_mass", t.discarded_mass);
        w.meta("trunc_mode", t.trunc_mode);
        w.meta("trunc_threshold", t.trunc_threshold);
    }
}

void density_table_csv(std::ostream& os, const DensityTable& t) {
    CsvWriter w(os, "deepprior-density-1");
    density_meta(w, t);
    std::vector<std::string> cols = {"radius", "exact_density",
                                     "gaussian_limit"};
    if (t.with_edgeworth) {
        cols.push_back("edgeworth");
        cols.push_back("edgeworth_negative");
    }
    cols.push_back("error");
    w.header(cols);
    for (const auto& row : t.rows) {
        std::vector<std::string> cells = {format_sci(row.r),
                                          format_sci(row.exact),
                                          format_sci(row.gauss)};
        if (t.with_edgeworth) {
            cells.push_back(format_sci(row.edge));
            cells.push_back(row.edge_negative ? "1" : "0");
        }
        cells.push_back(row.error);
        w.row_cells(cells);
    }
}

ordered_json density_table_json(const DensityTable& t) {
    ordered_json j;
    j["schema"] = "deepprior-density-1";
    j["spec"] = spec_json(t.spec);
    if (t.has_mixture) {
        j["atom_mass"] = t.atom_mass;
        j["continuous_mass"] = t.continuous_mass;
        j["discarded_mass"] = t.discarded_mass;
        j["trunc_mode"] = t.trunc_mode;
        j["trunc_threshold"] = t.trunc_threshold;
    }
    ordered_json cols = {"radius", "exact_density", "gaussian_limit"};
    if (t.with_edgeworth) {
        cols.push_back("edgeworth");
        cols.push_back("edgeworth_negative");
    }
    cols.push_back("error");
    j["columns"] = cols;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json cells = {row.r, row.exact, row.gauss};
        if (t.with_edgeworth) {
            cells.push_back(row.edge);
            cells.push_back(row.edge_negative);
        }
        cells.push_back(row.error);
        rows.push_back(cells);
    }
    j["rows"] = rows;
    return j;
}

// --------------------------------------------------------------- commands

struct DensityArgs {
    SpecOpts spec;
    TruncOpts trunc;
    std::string grid = "0.01:10:100";
    double tol = 0.0;
    bool no_edgeworth = false;
    std::string format = "csv";
    std::string out = "-";
};

void run_density(const DensityArgs& a) {
    const auto spec = build_spec(a.spec);
    const auto grid = make_grid(parse_grid(a.grid, true));
    ContourConfig ccfg;
    if (a.tol > 0.0) ccfg.target_rel_tol = a.tol;
    ReLUMixture mix;
    const bool is_relu = spec.activation == Activation::relu;
    if (is_relu) mix = build_mixture(spec, mixture_config(a.trunc));
    auto table = compute_density_table(spec, is_relu ? &mix : nullptr, grid,
                                       ccfg, !a.no_edgeworth);
    table.trunc_mode = a.trunc.mode;
    table.trunc_threshold = a.trunc.threshold;
    OutStream os(a.out);
    if (a.format == "json") {
        *os.os << density_table_json(table).dump(2) << "\n";
    } else {
        density_table_csv(*os.os, table);
    }
}

struct CharfunArgs {
    SpecOpts spec;
    TruncOpts trunc;
    std::string grid = "0:20:101";
    double tol = 0.0;
    std::string format = "csv";
    std::string out = "-";
};

void run_charfun(const CharfunArgs& a) {
    const auto spec = build_spec(a.spec);
    const auto grid = make_grid(parse_grid(a.grid, false));
    ContourConfig ccfg;
    if (a.tol > 0.0) ccfg.target_rel_tol = a.tol;
    const bool is_relu = spec.activation == Activation::relu;
    ReLUMixture mix;
    if (is_relu) mix = build_mixture(spec, mixture_config(a.trunc));
    const auto ws = WidthScaledSpec::from_spec(spec);
    const double v = limit_variance(ws);

    struct Row {
        double q, exact, gauss;
        std::string error;
    };
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (double q : grid) {
        Row row{q, std::numeric_limits<double>::quiet_NaN(),
                std::exp(-0.5 * v * q * q), ""};
        try {
            row.exact = (is_relu ? charfun_relu(spec, q, mix, ccfg)
                                 : charfun_linear(spec, q, ccfg))
                            .value;
        } catch (const AccuracyError&) {
            row.error = "accuracy";
        } catch (const DomainError&) {
            row.error = "domain";
        }
        rows.push_back(std::move(row));
    }

    OutStream os(a.out);
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "deepprior-charfun-1";
        j["spec"] = spec_json(spec);
        if (is_relu) j["atom_mass"] = mix.atom_mass;
        j["columns"] = {"q", "exact_charfun", "gaussian_limit", "error"};
        ordered_json jr = ordered_json::array();
        for (const auto& row : rows) {
            jr.push_back({row.q, row.exact, row.gauss, row.error});
        }
        j["rows"] = jr;
        *os.os << j.dump(2) << "\n";
    } else {
        CsvWriter w(*os.os, "deepprior-charfun-1");
        write_spec_meta(w, spec);
        if (is_relu) w.meta("atom_mass", mix.atom_mass);
        w.header({"q", "exact_charfun", "gaussian_limit", "error"});
        for (const auto& row : rows) {
            w.row_cells({format_sci(row.q), format_sci(row.exact),
                         format_sci(row.gauss), row.error});
        }
    }
}

struct MomentsArgs {
    SpecOpts spec;
    std::vector<double> orders;
    std::string format = "csv";
    std::string out = "-";
};

void run_moments(const MomentsArgs& a) {
    const auto spec = build_spec(a.spec);
    std::vector<double> orders = a.orders;
    if (orders.empty()) orders = {2.0, 4.0, 6.0};
    const bool is_relu = spec.activation == Activation::relu;
    struct Row {
        double order, moment, log_moment;
    };
    std::vector<Row> rows;
    for (double m : orders) {
        const double lm = is_relu ? log_moment_norm_relu(spec, m)
                                  : log_moment_norm_linear(spec, m);
        rows.push_back({m, std::exp(lm), lm});
    }
    OutStream os(a.out);
    if (a.format == "json") {
        ordered_json j;
        j["schema"] = "deepprior-moments-1";
        j["spec"] = spec_json(spec);
        j["columns"] = {"order", "moment_norm", "log_moment_norm"};
        ordered_json jr = ordered_json::array();
        for (const auto& row : rows) {
            jr.push_back({row.order, row.moment, row.log_moment});
        }
        j["rows"] = jr;
        *os.os << j.dump(2) << "\n";
    } else {
        CsvWriter w(*os.os, "deepprior-moments-1");
        write_spec_meta(w, spec);
        w.header({"order", "moment_norm", "log_moment_norm"});
        for (const auto& row : rows) {
            w.row({row.order, row.moment, row.log_moment});
        }
    }
}

struct SampleArgs {
    SpecOpts spec;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 12345;
    int bins = 60;
    std::string range;
    int component = -1;
    int workers = 0;
    std::string out;
    std::string summary;
};

void run_sample(const SampleArgs& a) {
    const auto spec = build_spec(a.spec);
    if (a.samples == 0) throw ConfigError("--samples must be positive");
    const bool is_relu = spec.activation == Activation::relu;
    const bool radial = a.component < 0;
    const double m2 = is_relu ? moment_norm_relu(spec, 2.0)
                              : moment_norm_linear(spec, 2.0);
    const double m4 = is_relu ? moment_norm_relu(spec, 4.0)
                              : moment_norm_linear(spec, 4.0);
    double lo, hi;
    if (!a.range.empty()) {
        const auto parts = split(a.range, ':');
        if (parts.size() != 2) {
            throw ConfigError("--range must be lo:hi, got '" + a.range + "'");
        }
        lo = parse_double(parts[0], "range lo");
        hi = parse_double(parts[1], "range hi");
    } else {
        const double sd = std::sqrt(std::max(m4 - m2 * m2, 0.0));
        hi = std::sqrt(m2 + 8.0 * sd);
        lo = radial ? 0.0 : -hi;
    }

    HistogramPlan plan;
    plan.radial = radial;
    plan.component = radial ? 0 : a.component;
    plan.bins = a.bins;
    plan.lo = lo;
    plan.hi = hi;
    McConfig mcfg;
    mcfg.workers = a.workers;

    const auto t0 = std::chrono::steady_clock::now();
    const auto batch = sample_outputs(spec, a.seed, a.samples, mcfg, &plan);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const auto hist =
        make_histogram(batch, radial, a.bins, lo, hi, plan.component);

    {
        OutStream os(a.out);
        CsvWriter w(*os.os, "deepprior-hist-1");
        write_spec_meta(w, spec);
        w.meta("seed", std::to_string(a.seed));
        w.meta("samples", std::to_string(batch.count));
        w.meta("zero_count", std::to_string(batch.zero_count));
        w.meta("kind", radial ? "radial" : "component");
        if (!radial) w.meta("component", std::to_string(a.component));
        w.meta("out_of_range", std::to_string(hist.out_of_range));
        w.header({"bin_lo", "bin_hi", "count", "density_est"});
        for (int b = 0; b < a.bins; ++b) {
            w.row_cells({format_sci(hist.edges[b]),
                         format_sci(hist.edges[b + 1]),
                         std::to_string(hist.counts[b]),
                         format_sci(hist.density[b])});
        }
    }

    ordered_json j;
    j["schema"] = "deepprior-sample-1";
    j["spec"] = spec_json(spec);
    j["seed"] = a.seed;
    j["samples"] = batch.count;
    j["zero_count"] = batch.zero_count;
    j["zero_fraction"] =
        static_cast<double>(batch.zero_count) / static_cast<double>(batch.count);
    j["atom_mass_exact"] = is_relu ? atom_mass(spec) : 0.0;
    ordered_json moments = ordered_json::array();
    for (double m : {2.0, 4.0, 6.0, 8.0}) {
        const auto est = empirical_moment(batch, m);
        const double exact = is_relu ? moment_norm_relu(spec, m)
                                     : moment_norm_linear(spec, m);
        ordered_json e;
        e["order"] = m;
        e["empirical"] = est.mean;
        e["std_error"] = est.std_error;
        e["exact"] = exact;
        moments.push_back(e);
    }
    j["moments"] = moments;
    ordered_json h;
    h["file"] = a.out;
    h["kind"] = radial ? "radial" : "component";
    if (!radial) h["component"] = a.component;
    h["bins"] = a.bins;
    h["lo"] = lo;
    h["hi"] = hi;
    h["out_of_range"] = hist.out_of_range;
    j["histogram"] = h;
    j["elapsed_seconds"] = elapsed;
    write_json_file(a.summary.empty() ? a.out + ".json" : a.summary, j);
}

struct ValidateArgs {
    std::vector<int> only;
    std::string out = "-";
    std::uint64_t seed = ValidationConfig{}.seed;
    std::uint64_t samples = 1000000;
    std::uint64_t figure_samples = 10000000;
    int workers = 0;
};

void run_validate(const ValidateArgs& a) {
    ValidationConfig vcfg;
    vcfg.seed = a.seed;
    vcfg.small_samples = a.samples;
    vcfg.figure_samples = a.figure_samples;
    vcfg.workers = a.workers;
    std::vector<int> ids = a.only;
    if (ids.empty()) {
        for (int i = 1; i <= 11; ++i) ids.push_back(i);
    }
    std::vector<CheckResult> checks;
    checks.reserve(ids.size());
    for (int id : ids) {
        auto c = run_check(id, vcfg);
        std::fprintf(stderr, "check %2d %-28s %s  [%.1fs]\n", c.id,
                     c.name.c_str(), c.pass ? "PASS" : "FAIL",
                     c.elapsed_seconds);
        checks.push_back(std::move(c));
    }
    OutStream os(a.out);
    *os.os << validation_report_json(checks);
    for (const auto& c : checks) {
        if (!c.pass) g_exit = 1;
    }
}

struct TailArgs {
    SpecOpts spec;
    int max_order = 400;
    std::string out = "-";
    std::string summary;
};

void run_tail(const TailArgs& a) {
    const auto spec = build_spec(a.spec);
    if (a.max_order < 2) throw ConfigError("--max-order must be >= 2");
    std::vector<double> orders;
    for (int m = 2; m <= a.max_order; m += 2) orders.push_back(m);
    const auto curve = root_moment_curve(spec, orders);
    const auto est = estimate_tail_parameter(curve);
    {
        OutStream os(a.out);
        CsvWriter w(*os.os, "deepprior-tail-1");
        write_spec_meta(w, spec);
        w.meta("theta_hat", est.theta_hat);
        w.meta("intercept", est.intercept);
        w.meta("orders_used", std::to_string(est.orders_used));
        w.header({"order", "root_moment"});
        for (const auto& [m, rm] : curve) w.row({m, rm});
    }
    ordered_json j;
    j["schema"] = "deepprior-tail-1";
    j["spec"] = spec_json(spec);
    j["theta_hat"] = est.theta_hat;
    j["intercept"] = est.intercept;
    j["orders_used"] = est.orders_used;
    j["max_order"] = a.max_order;
    if (!a.summary.empty()) {
        write_json_file(a.summary, j);
    } else if (!a.out.empty() && a.out != "-") {
        write_json_file(a.out + ".json", j);
    }
}

// ---------------------------------------------------------------- figures

struct FigArgs {
    std::vector<std::string> curves;
    std::vector<int> n2_list;
    int n1 = 100;
    int n3 = 100;
    std::string out_dir = ".";
    int points = 300;
};

double auto_rmax(const NetworkSpec& spec) {
    const bool is_relu = spec.activation == Activation::relu;
    const double m2 = is_relu ? moment_norm_relu(spec, 2.0)
                              : moment_norm_linear(spec, 2.0);
    const double m4 = is_relu ? moment_norm_relu(spec, 4.0)
                              : moment_norm_linear(spec, 4.0);
    return std::sqrt(m2 + 10.0 * std::sqrt(std::max(m4 - m2 * m2, 0.0)));
}

void emit_curve_csv(const std::string& path, const NetworkSpec& spec,
                    int points, bool with_edgeworth, bool linear_grid) {
    GridSpec g;
    g.lo = linear_grid ? 0.0 : 1e-3;
    g.hi = auto_rmax(spec);
    g.points = points;
    g.log_spaced = !linear_grid;
    ReLUMixture mix;
    const bool is_relu = spec.activation == Activation::relu;
    if (is_relu) mix = build_mixture(spec);
    auto table = compute_density_table(spec, is_relu ? &mix : nullptr,
                                       make_grid(g), ContourConfig{},
                                       with_edgeworth);
    table.trunc_mode = "product";
    table.trunc_threshold = MixtureConfig{}.threshold;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    density_table_csv(f, table);
    std::fprintf(stderr, "wrote %s\n", path.c_str());
}

// Depth sweep of exact density vs its Gaussian limit.
void run_fig1(const FigArgs& a) {
    for (const auto& text : a.curves) {
        const auto widths = parse_width_list(text);
        const auto spec = make_spec(widths, Activation::linear,
                                    KappaMode::unit_variance_linear);
        emit_curve_csv(a.out_dir + "/fig1_" + join_ints(widths, 'x') + ".csv",
                       spec, a.points, false, false);
    }
}

// Bottleneck sweep: depth-4 nets narrowed in the middle.
void run_fig2(const FigArgs& a) {
    for (int n2 : a.n2_list) {
        const std::vector<int> widths = {a.n1, n2, a.n3, 1};
        const auto spec = make_spec(widths, Activation::linear,
                                    KappaMode::unit_variance_linear);
        emit_curve_csv(a.out_dir + "/fig2_n2_" + std::to_string(n2) + ".csv",
                       spec, a.points, false, false);
    }
}

// Variance-matched linear vs ReLU pair per width list.
void run_fig3(const FigArgs& a) {
    for (const auto& text : a.curves) {
        const auto widths = parse_width_list(text);
        const auto tag = join_ints(widths, 'x');
        emit_curve_csv(a.out_dir + "/fig3_linear_" + tag + ".csv",
                       make_spec(widths, Activation::linear,
                                 KappaMode::unit_variance_linear),
                       a.points, false, false);
        emit_curve_csv(a.out_dir + "/fig3_relu_" + tag + ".csv",
                       make_spec(widths, Activation::relu,
                                 KappaMode::unit_variance_relu),
                       a.points, false, false);
    }
}

// Edgeworth correction quality across the bulk.
void run_fig4(const FigArgs& a) {
    for (const auto& text : a.curves) {
        const auto widths = parse_width_list(text);
        const auto spec = make_spec(widths, Activation::linear,
                                    KappaMode::unit_variance_linear);
        emit_curve_csv(a.out_dir + "/fig4_" + join_ints(widths, 'x') + ".csv",
                       spec, a.points, true, true);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "deepprior: exact single-input function-space priors of finite deep "
        "networks"};
    app.set_version_flag("--version", "deepprior 1.0.0");
    app.set_config("--config", "",
                   "read options from a key=value file (CLI flags override)");
    app.require_subcommand(1);

    auto d = std::make_shared<DensityArgs>();
    auto* cd = app.add_subcommand(
        "density", "exact output-norm density on a radial grid");
    add_spec_options(cd, d->spec);
    add_trunc_options(cd, d->trunc);
    cd->add_option("--grid", d->grid,
                   "radial grid min:max:points[:lin|:log] (default "
                   "0.01:10:100, log)");
    cd->add_option("--tol", d->tol, "target relative tolerance")
        ->check(CLI::PositiveNumber);
    cd->add_flag("--no-edgeworth", d->no_edgeworth,
                 "omit the Edgeworth columns");
    cd->add_option("--format", d->format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cd->add_option("--out", d->out, "output path (default stdout)");
    cd->callback([d] { run_density(*d); });

    auto cf = std::make_shared<CharfunArgs>();
    auto* cc = app.add_subcommand(
        "charfun", "radial characteristic function on a frequency grid");
    add_spec_options(cc, cf->spec);
    add_trunc_options(cc, cf->trunc);
    cc->add_option("--grid", cf->grid,
                   "frequency grid min:max:points[:lin|:log] (default "
                   "0:20:101, lin)");
    cc->add_option("--tol", cf->tol, "target relative tolerance")
        ->check(CLI::PositiveNumber);
    cc->add_option("--format", cf->format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cc->add_option("--out", cf->out, "output path (default stdout)");
    cc->callback([cf] { run_charfun(*cf); });

    auto mo = std::make_shared<MomentsArgs>();
    auto* cm = app.add_subcommand("moments",
                                  "closed-form moments of the output norm");
    add_spec_options(cm, mo->spec);
    cm->add_option("--orders", mo->orders,
                   "moment orders (default 2,4,6)")
        ->delimiter(',');
    cm->add_option("--format", mo->format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cm->add_option("--out", mo->out, "output path (default stdout)");
    cm->callback([mo] { run_moments(*mo); });

    auto sa = std::make_shared<SampleArgs>();
    auto* cs = app.add_subcommand(
        "sample", "Monte Carlo oracle: histogram CSV plus JSON summary");
    add_spec_options(cs, sa->spec);
    cs->add_option("--samples", sa->samples, "sample count (default 1e6)");
    cs->add_option("--seed", sa->seed, "master seed (default 12345)");
    cs->add_option("--bins", sa->bins, "histogram bins (default 60)")
        ->check(CLI::PositiveNumber);
    cs->add_option("--range", sa->range,
                   "histogram range lo:hi (default from exact moments)");
    cs->add_option("--component", sa->component,
                   "bin this output component instead of the radius");
    cs->add_option("--workers", sa->workers,
                   "worker threads, 0 = auto (result is identical)");
    cs->add_option("--out", sa->out, "histogram CSV path")->required();
    cs->add_option("--summary", sa->summary,
                   "summary JSON path (default <out>.json)");
    cs->callback([sa] { run_sample(*sa); });

    auto va = std::make_shared<ValidateArgs>();
    auto* cv = app.add_subcommand(
        "validate", "run the quality gates and emit a JSON report");
    cv->add_option("--only", va->only, "check ids to run (default all)")
        ->delimiter(',')
        ->check(CLI::Range(1, 11));
    cv->add_option("--out", va->out, "report path (default stdout)");
    cv->add_option("--seed", va->seed, "base seed for the MC checks");
    cv->add_option("--samples", va->samples,
                   "samples for the small MC checks (default 1e6)");
    cv->add_option("--figure-samples", va->figure_samples,
                   "samples per histogram run (default 1e7)");
    cv->add_option("--workers", va->workers,
                   "worker threads, 0 = auto (result is identical)");
    cv->callback([va] { run_validate(*va); });

    auto ta = std::make_shared<TailArgs>();
    auto* ct = app.add_subcommand(
        "tail", "root-moment curve and fitted tail exponent");
    add_spec_options(ct, ta->spec);
    ct->add_option("--max-order", ta->max_order,
                   "largest moment order (default 400)");
    ct->add_option("--out", ta->out, "CSV path (default stdout)");
    ct->add_option("--summary", ta->summary,
                   "JSON path (default <out>.json when --out is a file)");
    ct->callback([ta] { run_tail(*ta); });

    auto* cg = app.add_subcommand("figure", "emit figure data files");
    cg->require_subcommand(1);
    auto f1 = std::make_shared<FigArgs>();
    auto* c1 = cg->add_subcommand(
        "fig1", "density vs Gaussian limit per width list (linear)");
    c1->add_option("--curve", f1->curves, "width list, e.g. 10,10,1")
        ->required();
    c1->add_option("--out-dir", f1->out_dir, "output directory (default .)");
    c1->add_option("--points", f1->points, "grid points (default 300)")
        ->check(CLI::PositiveNumber);
    c1->callback([f1] { run_fig1(*f1); });

    auto f2 = std::make_shared<FigArgs>();
    auto* c2 = cg->add_subcommand(
        "fig2", "bottleneck sweep n1 -> n2 -> n3 -> 1 (linear)");
    c2->add_option("--n2-list", f2->n2_list, "bottleneck widths")
        ->delimiter(',')
        ->required();
    c2->add_option("--n1", f2->n1, "first hidden width (default 100)");
    c2->add_option("--n3", f2->n3, "third hidden width (default 100)");
    c2->add_option("--out-dir", f2->out_dir, "output directory (default .)");
    c2->add_option("--points", f2->points, "grid points (default 300)")
        ->check(CLI::PositiveNumber);
    c2->callback([f2] { run_fig2(*f2); });

    auto f3 = std::make_shared<FigArgs>();
    auto* c3 = cg->add_subcommand(
        "fig3", "variance-matched linear vs ReLU pair per width list");
    c3->add_option("--curve", f3->curves, "width list, e.g. 5,5,1")
        ->required();
    c3->add_option("--out-dir", f3->out_dir, "output directory (default .)");
    c3->add_option("--points", f3->points, "grid points (default 300)")
        ->check(CLI::PositiveNumber);
    c3->callback([f3] { run_fig3(*f3); });

    auto f4 = std::make_shared<FigArgs>();
    auto* c4 = cg->add_subcommand(
        "fig4", "Edgeworth correction quality per width list (linear)");
    c4->add_option("--curve", f4->curves, "width list, e.g. 10,10,1")
        ->required();
    c4->add_option("--out-dir", f4->out_dir, "output directory (default .)");
    c4->add_option("--points", f4->points, "grid points (default 300)")
        ->check(CLI::PositiveNumber);
    c4->callback([f4] { run_fig4(*f4); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy failure: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return g_exit;
}
