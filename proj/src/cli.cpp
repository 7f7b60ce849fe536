#include "bql/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bql/channels.hpp"
#include "bql/coboson.hpp"
#include "bql/errors.hpp"
#include "bql/fock.hpp"
#include "bql/io.hpp"
#include "bql/measure.hpp"
#include "bql/oracle.hpp"

namespace bql::cli {

namespace {

using io::json;

struct Options {
    std::string channel = "optimal";
    int n_max = 1;
    double p0 = 2.0 / 3.0;
    int n = 1;
    std::vector<double> gamma_t;
    double reflectivity = 0.05;
    std::vector<double> f;
    std::vector<double> lambda;
    std::string lambda_file;
    int random_d = 0;
    int d_min = 2;
    int d_max = 50;
    std::uint64_t seed = 0;
    double nbar = 1.0;
    std::string out;
    std::string format;
    std::string config;

    json channel_descriptor;  // from config only
    json initial;             // from config only
};

std::shared_ptr<spdlog::logger> make_logger() {
    auto logger = spdlog::get("bql");
    if (!logger) {
        logger = spdlog::stderr_color_mt("bql");
    }
    const char* env = std::getenv("BQL_LOG");
    const std::string level = env ? env : "quiet";
    if (level == "debug") {
        logger->set_level(spdlog::level::debug);
    } else if (level == "info") {
        logger->set_level(spdlog::level::info);
    } else {
        logger->set_level(spdlog::level::off);
    }
    return logger;
}

std::size_t positive(int value, const char* flag) {
    if (value < 1) {
        throw InvalidArgument(std::string(flag) + " must be at least 1");
    }
    return static_cast<std::size_t>(value);
}

// Fills options that were not given on the command line from the JSON config.
void merge_config(const CLI::App& sub, Options& o) {
    if (o.config.empty()) {
        return;
    }
    std::ifstream in(o.config);
    if (!in) {
        throw InvalidArgument("cannot open config file " + o.config);
    }
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw InvalidArgument("config file " + o.config + " is not a JSON object");
    }
    auto unset = [&](const char* flag) { return sub.count(flag) == 0; };
    auto take = [&](const char* key, const char* flag, auto& field) {
        if (j.contains(key) && unset(flag)) {
            field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
        }
    };
    try {
        if (j.contains("channel") && j.at("channel").is_object()) {
            if (unset("--channel")) {
                o.channel_descriptor = j.at("channel");
            }
        } else {
            take("channel", "--channel", o.channel);
        }
        take("n_max", "--n-max", o.n_max);
        take("p0", "--p0", o.p0);
        take("n", "--n", o.n);
        take("reflectivity", "--reflectivity", o.reflectivity);
        take("f", "--f", o.f);
        take("lambda", "--lambda", o.lambda);
        take("lambda_file", "--lambda-file", o.lambda_file);
        take("random_d", "--random-d", o.random_d);
        take("d_min", "--d-min", o.d_min);
        take("d_max", "--d-max", o.d_max);
        take("seed", "--seed", o.seed);
        take("nbar", "--nbar", o.nbar);
        take("out", "--out", o.out);
        take("format", "--format", o.format);
        if (j.contains("gamma_t") && unset("--gamma-t")) {
            o.gamma_t = j.at("gamma_t").is_array() ? j.at("gamma_t").get<std::vector<double>>()
                                                    : std::vector<double>{j.at("gamma_t").get<double>()};
        }
        if (j.contains("initial") && unset("--p0") && unset("--n")) {
            o.initial = j.at("initial");
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config file field has the wrong type: ") + e.what());
    }
}

double single_gamma(const Options& o) {
    if (o.gamma_t.size() != 1) {
        throw InvalidArgument("--gamma-t needs exactly one value for this channel");
    }
    return o.gamma_t.front();
}

LadderChannel build_channel(const Options& o) {
    if (!o.channel_descriptor.is_null()) {
        return io::channel_from_json(o.channel_descriptor);
    }
    const auto kind = channel_kind_from_string(o.channel);
    if (kind == ChannelKind::custom) {
        if (o.f.empty()) {
            throw InvalidArgument("--channel custom needs --f");
        }
        return rescale_to_valid(o.f);
    }
    const auto n_max = positive(o.n_max, "--n-max");
    switch (kind) {
        case ChannelKind::optimal:
            return optimal_channel(n_max);
        case ChannelKind::distinguishable:
            return distinguishable_channel(n_max);
        case ChannelKind::pdc:
            return pdc_channel(single_gamma(o), n_max);
        case ChannelKind::bs:
            return bs_subtraction_channel(o.reflectivity, n_max);
        case ChannelKind::feshbach:
            return feshbach_ladder(single_gamma(o), n_max);
        case ChannelKind::custom:
            break;
    }
    throw InvalidArgument("unhandled channel");
}

NumberDistribution build_initial(const Options& o) {
    if (!o.initial.is_null()) {
        if (o.initial.contains("probs")) {
            return NumberDistribution(o.initial.at("probs").get<std::vector<double>>());
        }
        return NumberDistribution::two_point(o.initial.value("p0", 2.0 / 3.0),
                                             positive(o.initial.value("n", 1), "initial.n"));
    }
    return NumberDistribution::two_point(o.p0, positive(o.n, "--n"));
}

SchmidtSpectrum build_spectrum(const Options& o) {
    const int sources = static_cast<int>(!o.lambda.empty()) + static_cast<int>(!o.lambda_file.empty()) +
                        static_cast<int>(o.random_d > 0);
    if (sources != 1) {
        throw InvalidArgument("give exactly one of --lambda, --lambda-file, --random-d");
    }
    if (!o.lambda.empty()) {
        return SchmidtSpectrum(o.lambda);
    }
    if (!o.lambda_file.empty()) {
        return io::load_spectrum(o.lambda_file);
    }
    std::mt19937_64 rng(o.seed);
    return SchmidtSpectrum::random(static_cast<std::size_t>(o.random_d), rng);
}

struct Payload {
    json doc;
    io::CsvTable csv;
};

std::string resolve_format(const Options& o, const char* fallback) {
    const std::string fmt = o.format.empty() ? fallback : o.format;
    if (fmt != "json" && fmt != "csv") {
        throw InvalidArgument("--format must be json or csv");
    }
    return fmt;
}

Payload cmd_measure(const Options& o, spdlog::logger& log) {
    const LadderChannel ch = build_channel(o);
    const NumberDistribution initial = build_initial(o);
    log.info("measure: channel {} n_max {} initial n_max {}", to_string(ch.kind()), ch.n_max(),
             initial.n_max());

    const bool is_sub = ch.direction() == Direction::subtraction;
    const LadderChannel add = is_sub ? ch.conjugate() : ch;
    const MeasureReport r = run_as_pipeline(initial, add, is_sub ? std::optional(ch) : std::nullopt);

    Payload p;
    p.doc = io::to_json(r);
    p.csv.header = {"p0_initial", "p0_as", "m_raw", "m_script", "add_success", "sub_success", "calibrated"};
    p.csv.rows.push_back({r.p0_initial, r.p0_as, r.m_raw, r.m_script, r.add_success, r.sub_success,
                          r.calibrated ? 1.0 : 0.0});
    return p;
}

Payload cmd_coboson(const Options& o, spdlog::logger& log) {
    const SchmidtSpectrum spectrum = build_spectrum(o);
    const auto n_max = positive(o.n_max, "--n-max");
    const CobosonTable table = build_coboson_table(spectrum, n_max);
    const LadderChannel ch = coboson_channel(table, n_max);
    const MeasureReport r = run_as_pipeline(NumberDistribution::two_point(2.0 / 3.0, 1), ch);
    log.info("coboson: d {} chi2 {}", spectrum.d(), table.chi2());

    Payload p;
    p.doc = json{{"lambda", std::vector<double>(spectrum.lambdas().begin(), spectrum.lambdas().end())},
                 {"table", io::to_json(table)},
                 {"channel", io::to_json(ch)},
                 {"report", io::to_json(r)},
                 {"m_closed_form", coboson_measure_closed_form(table.chi2())}};
    p.csv.header = {"n", "chi", "alpha_sq", "eps_norm_sq", "delta_diag"};
    for (std::size_t n = 1; n <= n_max; ++n) {
        p.csv.rows.push_back({static_cast<double>(n), table.chi[n], table.alpha_sq_at(n),
                              table.eps_norm_sq_at(n), table.delta_at(n)});
    }
    return p;
}

double pipeline_measure_uniform(std::size_t d) {
    const auto table = build_coboson_table(SchmidtSpectrum::uniform(d), 1);
    return run_as_pipeline(NumberDistribution::two_point(2.0 / 3.0, 1), coboson_channel(table, 1)).m_script;
}

Payload cmd_scan(const Options& o, spdlog::logger& log) {
    Payload p;
    json rows = json::array();
    if (!o.gamma_t.empty()) {
        const auto n_max = positive(o.n_max, "--n-max");
        p.csv.header = {"gamma_t", "f0", "f1", "m_pdc", "m_feshbach", "max_abs_diff"};
        const auto initial = NumberDistribution::two_point(2.0 / 3.0, 1);
        for (double g : o.gamma_t) {
            const auto pdc = pdc_channel(g, n_max);
            const auto fes = feshbach_ladder(g, n_max);
            double diff = 0.0;
            for (std::size_t n = 0; n <= n_max; ++n) {
                diff = std::max(diff, std::abs(pdc[n] - fes[n]));
            }
            const double m_pdc = run_as_pipeline(initial, pdc).m_script;
            const double m_fes = run_as_pipeline(initial, fes).m_script;
            p.csv.rows.push_back({g, pdc[0], pdc[1], m_pdc, m_fes, diff});
            rows.push_back({{"gamma_t", g}, {"f0", pdc[0]}, {"f1", pdc[1]}, {"m_pdc", m_pdc},
                            {"m_feshbach", m_fes}, {"max_abs_diff", diff}});
        }
    } else {
        if (o.d_min < 2 || o.d_max < o.d_min) {
            throw InvalidArgument("scan needs 2 <= --d-min <= --d-max");
        }
        log.info("scan: d {}..{}", o.d_min, o.d_max);
        p.csv.header = {"d", "chi2", "m_pipeline", "m_eq7"};
        for (int d = o.d_min; d <= o.d_max; ++d) {
            const auto du = static_cast<std::size_t>(d);
            const double chi2 = max_entangled_table(du, 1).chi2();
            const double m_pipe = pipeline_measure_uniform(du);
            const double m_eq7 = reference_max_entangled_measure(du);
            p.csv.rows.push_back({static_cast<double>(d), chi2, m_pipe, m_eq7});
            rows.push_back({{"d", d}, {"chi2", chi2}, {"m_pipeline", m_pipe}, {"m_eq7", m_eq7}});
        }
    }
    p.doc = json{{"rows", std::move(rows)}};
    return p;
}

Payload cmd_channel(const Options& o, spdlog::logger&) {
    const LadderChannel ch = build_channel(o);
    const auto comm = commutator_diag(ch);
    Payload p;
    p.doc = io::to_json(ch);
    p.doc["commutator_diag"] = comm;
    p.csv.header = {"n", "f", "commutator_diag"};
    for (std::size_t n = 0; n <= ch.n_max(); ++n) {
        p.csv.rows.push_back({static_cast<double>(n), ch[n], comm[n]});
    }
    return p;
}

Payload cmd_oracle_verify(const Options& o, spdlog::logger& log) {
    const SchmidtSpectrum spectrum = build_spectrum(o);
    const auto top = positive(o.n, "--n");
    if (top < 2) {
        throw InvalidArgument("oracle-verify needs --n >= 2");
    }
    const std::size_t n_max = top - 1;
    const auto fast = build_coboson_table(spectrum, n_max);
    const auto slow = oracle::oracle_coboson_table(spectrum, n_max);

    double worst = std::abs(fast.purity - slow.purity);
    auto compare = [&worst](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, std::abs(a[i] - b[i]));
        }
    };
    compare(fast.chi, slow.chi);
    compare(fast.alpha_sq, slow.alpha_sq);
    compare(fast.eps_norm_sq, slow.eps_norm_sq);
    compare(fast.delta_diag, slow.delta_diag);

    std::vector<double> residuals;
    for (std::size_t n = 0; n <= n_max; ++n) {
        residuals.push_back(oracle::oracle_commutator_check(spectrum, n));
        worst = std::max(worst, residuals.back());
    }
    log.info("oracle-verify: d {} n {} worst {}", spectrum.d(), top, worst);

    Payload p;
    p.doc = json{{"d", spectrum.d()},
                 {"n", top},
                 {"lambda", std::vector<double>(spectrum.lambdas().begin(), spectrum.lambdas().end())},
                 {"recurrence", io::to_json(fast)},
                 {"oracle", io::to_json(slow)},
                 {"commutator_residual", residuals},
                 {"max_abs_discrepancy", worst},
                 {"pass", worst <= 1e-10}};
    p.csv.header = {"max_abs_discrepancy"};
    p.csv.rows.push_back({worst});
    return p;
}

Payload cmd_demo_thermal(const Options& o, const CLI::App& sub, spdlog::logger&) {
    const std::size_t n_max = sub.count("--n-max") ? positive(o.n_max, "--n-max") : 30;
    const auto thermal = thermal_distribution(o.nbar, n_max);
    const auto rho = FockDensityMatrix::diagonal(thermal);
    const auto [rho_as, rho_sa] = as_sa_transform(rho);
    const double expected = vacuum_probability(thermal) / thermal.mean_shifted_square();
    const double td = trace_distance(rho_as, rho_sa);

    const auto pops_as = rho_as.populations();
    const auto pops_sa = rho_sa.populations();
    Payload p;
    p.doc = json{{"nbar", o.nbar},
                 {"n_max", n_max},
                 {"p0_initial", vacuum_probability(thermal)},
                 {"p0_as", vacuum_probability(rho_as)},
                 {"p0_as_expected", expected},
                 {"p0_sa", vacuum_probability(rho_sa)},
                 {"trace_distance", td},
                 {"populations_as", std::vector<double>(pops_as.probs().begin(), pops_as.probs().end())},
                 {"populations_sa", std::vector<double>(pops_sa.probs().begin(), pops_sa.probs().end())}};
    p.csv.header = {"n", "p_initial", "p_as", "p_sa"};
    for (std::size_t n = 0; n <= n_max; ++n) {
        p.csv.rows.push_back({static_cast<double>(n), thermal[n], pops_as[n], pops_sa[n]});
    }
    return p;
}

void emit(const Payload& p, const std::string& format, const Options& o, std::ostream& out) {
    std::ostringstream buf;
    if (format == "csv") {
        io::write_csv(buf, p.csv);
    } else {
        buf << p.doc.dump(2) << '\n';
    }
    if (o.out.empty()) {
        out << buf.str();
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file || !(file << buf.str()) || !file.flush()) {
        throw InvalidArgument("cannot write output file " + o.out);
    }
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--channel", o.channel, "optimal|distinguishable|pdc|bs|feshbach|custom");
    sub->add_option("--n-max", o.n_max, "Fock truncation / coboson table depth");
    sub->add_option("--p0", o.p0, "Initial vacuum probability");
    sub->add_option("--n", o.n, "Occupied level of the two-point initial state");
    sub->add_option("--gamma-t", o.gamma_t, "PDC/Feshbach coupling times interaction time")
        ->delimiter(',');
    sub->add_option("--reflectivity", o.reflectivity, "Beam-splitter reflectivity");
    sub->add_option("--f", o.f, "Custom ladder amplitudes")->delimiter(',');
    sub->add_option("--lambda", o.lambda, "Schmidt coefficients")->delimiter(',');
    sub->add_option("--lambda-file", o.lambda_file, "JSON file {\"lambda\": [...]}");
    sub->add_option("--random-d", o.random_d, "Draw a random spectrum with this many modes");
    sub->add_option("--d-min", o.d_min, "Smallest d in a scan");
    sub->add_option("--d-max", o.d_max, "Largest d in a scan");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--nbar", o.nbar, "Thermal mean occupation");
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--format", o.format, "json|csv");
    sub->add_option("--config", o.config, "JSON config file; flags override it");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heralded addition/subtraction channels and the bosonic-quality measure"};
    app.require_subcommand(1);
    Options o;

    const std::pair<const char*, const char*> subs[] = {
        {"measure", "Run the addition-then-subtraction pipeline and report M"},
        {"coboson", "Coboson normalization table for a Schmidt spectrum"},
        {"scan", "Sweep d (maximally entangled) or gamma_t (PDC vs Feshbach) as a table"},
        {"channel", "Print a ladder channel descriptor"},
        {"oracle-verify", "Compare the recurrence against brute-force fermionic algebra"},
        {"demo-eq1", "Thermal state: AS vs SA ordering and their trace distance"},
    };
    for (const auto& [name, desc] : subs) {
        add_common(app.add_subcommand(name, desc), o);
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    auto log = make_logger();
    const CLI::App* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();
    try {
        merge_config(*sub, o);
        Payload payload;
        std::string format;
        if (cmd == "measure") {
            format = resolve_format(o, "json");
            payload = cmd_measure(o, *log);
        } else if (cmd == "coboson") {
            format = resolve_format(o, "json");
            payload = cmd_coboson(o, *log);
        } else if (cmd == "scan") {
            format = resolve_format(o, "csv");
            payload = cmd_scan(o, *log);
        } else if (cmd == "channel") {
            format = resolve_format(o, "json");
            payload = cmd_channel(o, *log);
        } else if (cmd == "oracle-verify") {
            format = resolve_format(o, "json");
            payload = cmd_oracle_verify(o, *log);
        } else {
            format = resolve_format(o, "json");
            payload = cmd_demo_thermal(o, *sub, *log);
        }
        emit(payload, format, o, out);
    } catch (const HeraldNeverFires& e) {
        err << "error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const PauliBlocked& e) {
        err << "error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace bql::cli
