// freudq: Gauss and MZ quadrature for Freud weights, worst-case errors, figures.

#include "freudq/freudq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace freudq;

namespace {

struct Config {
    double alpha = 2.0;
    int n = 0;
    std::string n_range;
    std::optional<double> s, p, q, t, eps;
    int dim = 1;
    std::uint64_t seed = 7;
    double trunc_tol = 1e-16;
    double L = 3.0;
    std::string space = "mse2";
    std::optional<std::string> sign_mode;
    std::string out;
    std::string format = "csv";
    std::string figure;
};

void fail(const std::string& msg) { throw Error(ErrorKind::invalid_parameter, msg); }

// "lo:hi" (odd values) or "lo:hi:step", or a comma list.
std::vector<int> parse_n_range(const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<int> parts;
        std::stringstream ss(text);
        for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(std::stoi(tok));
        if (parts.size() < 2 || parts.size() > 3) fail("n-range must be lo:hi or lo:hi:step");
        if (parts.size() == 2) return odd_range(parts[0], parts[1]);
        if (parts[2] <= 0) fail("n-range step must be positive");
        for (int n = parts[0]; n <= parts[1]; n += parts[2]) out.push_back(n);
        return out;
    }
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(std::stoi(tok));
    return out;
}

std::vector<int> n_values(const Config& c) {
    if (!c.n_range.empty()) {
        std::vector<int> v;
        try {
            v = parse_n_range(c.n_range);
        } catch (const std::logic_error&) {
            fail("cannot parse --n-range '" + c.n_range + "'");
        }
        if (v.empty()) fail("--n-range is empty");
        return v;
    }
    if (c.n < 1) fail("--n or --n-range is required");
    return {c.n};
}

SignMode parse_sign_mode(const std::string& s) {
    if (s == "random") return SignMode::random;
    if (s == "alternating") return SignMode::alternating;
    if (s == "positive") return SignMode::positive;
    fail("unknown sign mode '" + s + "'");
    return SignMode::random;
}

SpaceWeight parse_space(const Config& c) {
    auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) fail(std::string("--space ") + c.space + " needs " + flag);
        return *v;
    };
    if (c.space == "hs") return SpaceWeight::poly(need(c.s, "--s"));
    if (c.space == "epq") return SpaceWeight::exp(need(c.p, "--p"), need(c.q, "--q"));
    if (c.space == "ms") return SpaceWeight::mod_poly(need(c.s, "--s"));
    if (c.space == "mse") return SpaceWeight::mod_exp(need(c.s, "--s"));
    if (c.space == "mse2") {
        if (c.t) return SpaceWeight::mod_exp2_from_t(*c.t);
        return SpaceWeight::mod_exp2(need(c.s, "--s or --t"));
    }
    fail("unknown space '" + c.space + "'");
    return {};
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) fail("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void check_format(const Config& c) {
    if (c.format != "csv" && c.format != "json") fail("--format must be csv or json");
}

int cmd_coeffs(const Config& c) {
    check_format(c);
    if (c.n < 1) fail("--n is required");
    const auto basis = build_basis(c.alpha, c.n);
    Output out(c.out);
    if (c.format == "csv") {
        write_coeffs_csv(out.stream(), basis);
    } else {
        nlohmann::json j{{"alpha", c.alpha}, {"c0", basis.c0()}, {"sup_const", basis.sup_const()}};
        j["coeffs"] = std::vector<double>(basis.coeffs().begin(), basis.coeffs().end());
        out.stream() << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_nodes(const Config& c) {
    check_format(c);
    if (c.n < 1) fail("--n is required");
    const auto basis = build_basis(c.alpha, c.n + 1);
    const auto rule = gauss_rule(basis, c.n);
    Output out(c.out);
    if (c.format == "csv") {
        write_rule_csv(out.stream(), rule);
    } else {
        nlohmann::json j{{"alpha", c.alpha}, {"n", c.n}, {"nodes", rule.nodes},
                         {"omega", rule.omega}, {"tau", rule.tau}};
        out.stream() << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_wce(const Config& c) {
    check_format(c);
    if (c.alpha != 2.0 && c.space != "hs" && c.space != "epq")
        throw Error(ErrorKind::unsupported_alpha, "modulation spaces need alpha = 2");
    if (c.dim < 1) fail("--dim must be at least 1");
    const auto space = parse_space(c);
    space.validate();
    auto ns = n_values(c);
    std::sort(ns.begin(), ns.end());
    const int n_hi = ns.back();

    WCETable table;
    table.space = space.name();
    table.seed = c.seed;
    table.params["alpha"] = c.alpha;
    table.params["n_values"] = ns;
    table.params["dim"] = std::int64_t(c.dim);
    table.params["nodes"] = std::string("gauss X_n");
    if (space.kind == SpaceKind::mod_exp2) table.params["t"] = space.mehler_t();
    if (space.kind == SpaceKind::exp) {
        table.params["p"] = space.p;
        table.params["q"] = space.q;
    } else {
        table.params["s"] = space.s;
    }
    switch (space.kind) {
    case SpaceKind::poly:
    case SpaceKind::mod_poly: table.axis = Axis::log10_n; break;
    case SpaceKind::mod_exp: table.axis = Axis::sqrt_n; break;
    case SpaceKind::exp: table.axis = space.p < 1.0 ? Axis::sqrt_n : Axis::n; break;
    case SpaceKind::mod_exp2: table.axis = Axis::n; break;
    }

    const bool closed_form = space.kind == SpaceKind::mod_exp2 && c.alpha == 2.0;
    table.params["path"] = std::string(closed_form ? "mehler" : "series");
    if (!closed_form) table.params["trunc_tol"] = c.trunc_tol;

    auto basis = build_basis(c.alpha, std::max(512, n_hi + 2));
    if (!closed_form) {
        int need = basis.n_max();
        for (int n : ns) need = std::max(need, wce_series_index(basis, space, 2 * n, c.trunc_tol));
        if (need > basis.n_max()) basis = build_basis(c.alpha, need);
    }
    const double lambda0 = lambda_of(space, 0);

    table.rows.resize(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        WCERow row;
        row.n = ns[i];
        try {
            const auto rule = gauss_rule(basis, row.n);
            if (closed_form) {
                const auto r = wce_me2(rule.nodes, rule.omega, space.mehler_t());
                row.wce = r.value;
                row.clamped = r.clamped;
            } else {
                row.wce = wce_series(rule.nodes, rule.omega, basis, space, 2 * row.n, c.trunc_tol);
            }
            if (c.dim > 1) row.wce = tensor_wce(row.wce, 1.0 / basis.c0(), lambda0, c.dim);
        } catch (const std::exception& ex) {
            row.wce = std::nan("");
            row.failed = true;
            row.error = ex.what();
        }
        table.rows[i] = row;
    });
    table.fit();

    Output out(c.out);
    if (c.format == "csv") write_wce_csv(out.stream(), table);
    else out.stream() << to_json(table).dump(2) << '\n';
    for (const auto& r : table.rows)
        if (r.failed) {
            std::cerr << "n=" << r.n << ": " << r.error << '\n';
            return 2;
        }
    return 0;
}

int cmd_perturb(const Config& c) {
    check_format(c);
    if (c.n < 1) fail("--n is required");
    const double eps = c.eps.value_or(0.1);
    const SignMode mode = parse_sign_mode(c.sign_mode.value_or("random"));
    const auto basis = build_basis(c.alpha, c.n + 2);
    const auto rule = gauss_rule(basis, c.n + 1);
    auto moved = perturb_nodes(rule, eps, mode, c.seed);
    const auto sys = build_system(basis, c.n, std::move(moved.nodes), std::move(moved.tau));
    const auto omega = generalized_weights(sys, basis);
    const double min_omega = *std::min_element(omega.begin(), omega.end());
    const bool support = support_check(sys.nodes, c.alpha, c.n, c.L);

    Output out(c.out);
    if (c.format == "csv") {
        auto& os = out.stream();
        os << "# n=" << c.n << " eps=" << format_double(eps) << " sign_mode=" << to_string(mode)
           << " seed=" << c.seed << " a_n=" << format_double(sys.a_n)
           << " b_n=" << format_double(sys.b_n) << " min_omega=" << format_double(min_omega)
           << " support_check=" << (support ? "true" : "false") << '\n';
        os << "index,node,omega,tau\n";
        for (std::size_t i = 0; i < omega.size(); ++i)
            os << i << ',' << format_double(sys.nodes[i]) << ',' << format_double(omega[i]) << ','
               << format_double(sys.tau[i]) << '\n';
    } else {
        nlohmann::json j{{"n", c.n},           {"eps", eps},
                         {"sign_mode", to_string(mode)}, {"seed", c.seed},
                         {"a_n", sys.a_n},     {"b_n", sys.b_n},
                         {"min_omega", min_omega}, {"support_check", support},
                         {"L", c.L},           {"nodes", sys.nodes},
                         {"omega", omega},     {"tau", sys.tau}};
        out.stream() << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_figure(const Config& c) {
    const auto id = parse_figure_id(c.figure);
    if (!id) fail("unknown figure '" + c.figure + "'");
    auto spec = FigureSpec::defaults(*id);
    if (!c.n_range.empty() || c.n > 0) spec.n_values = n_values(c);
    if (c.t) spec.t = *c.t;
    if (c.s) spec.s = *c.s;
    if (c.eps) spec.eps = *c.eps;
    if (c.sign_mode) spec.sign_mode = parse_sign_mode(*c.sign_mode);
    spec.seed = c.seed;
    spec.trunc_tol = c.trunc_tol;
    const auto table = run_figure(spec);

    const std::string name = to_string(*id);
    if (c.out.empty()) {
        write_wce_csv(std::cout, table);
    } else {
        std::filesystem::create_directories(c.out);
        const auto dir = std::filesystem::path(c.out);
        std::ofstream csv(dir / (name + ".csv"));
        std::ofstream js(dir / (name + ".json"));
        if (!csv || !js) fail("cannot write into " + c.out);
        write_wce_csv(csv, table);
        js << to_json(table).dump(2) << '\n';
    }
    std::cerr << name << ": slope " << format_double(table.slope) << ", theory "
              << format_double(table.theory_slope) << '\n';
    for (const auto& r : table.rows)
        if (r.failed) {
            std::cerr << "n=" << r.n << ": " << r.error << '\n';
            return 2;
        }
    return 0;
}

int cmd_check() {
    bool all = true;
    auto report = [&](const std::string& name, bool ok, double value) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << format_double(value) << ")\n";
        all = all && ok;
    };

    const auto basis = build_basis(2.0, 64);
    {
        const auto rule = gauss_rule(basis, 21);
        double worst = 0.0;
        for (int k = 0; k <= 41; ++k) {
            const double target = k == 0 ? std::pow(2.0, -0.25) : 0.0;
            const double v = integrate(rule, [&](double x) { return basis.eval(x, k)[k]; });
            worst = std::max(worst, std::abs(v - target));
        }
        report("gauss exactness n=21, k<=41", worst < 1e-9, worst);
    }
    {
        const auto rule = gauss_rule(basis, 21);
        const auto sys = build_system(basis, 20, rule.nodes, rule.tau);
        const double dev = (sys.gram - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff();
        report("gauss nodes give S_n = I, n=20", dev < 1e-8, dev);
    }
    {
        const auto big = build_basis(2.0, 300);
        double worst = 0.0;
        for (double x : {-2.0, -0.7, 0.0, 0.3, 1.5})
            for (double y : {-1.1, 0.0, 0.9, 2.0}) {
                const double closed = mehler(1.25, x, y);
                const double series =
                    kernel_partial_sum(big, SpaceWeight::mod_exp2_from_t(1.25), 0, 300, x, y);
                const double scale = std::sqrt(mehler(1.25, x, x) * mehler(1.25, y, y));
                worst = std::max(worst, std::abs(series - closed) / scale);
            }
        report("Mehler closed form vs series, t=5/4", worst < 1e-10, worst);
    }
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauss and Marcinkiewicz-Zygmund quadrature for Freud weights"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--alpha", c.alpha, "Freud exponent")->capture_default_str();
        sub->add_option("--n", c.n, "order");
        sub->add_option("--n-range", c.n_range, "lo:hi (odd n), lo:hi:step, or a comma list");
        sub->add_option("--s", c.s, "smoothness parameter");
        sub->add_option("--p", c.p, "exponent p of E^p_q");
        sub->add_option("--q", c.q, "rate q of E^p_q");
        sub->add_option("--t", c.t, "Mehler parameter t > 1");
        sub->add_option("--dim", c.dim, "tensor dimension")->capture_default_str();
        sub->add_option("--eps", c.eps, "perturbation magnitude");
        sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
        sub->add_option("--trunc-tol", c.trunc_tol, "relative truncation tolerance")
            ->capture_default_str();
        sub->add_option("--L", c.L, "support constant")->capture_default_str();
        sub->add_option("--space", c.space, "hs, epq, ms, mse or mse2")->capture_default_str();
        sub->add_option("--sign-mode", c.sign_mode, "random, alternating or positive");
        sub->add_option("--out", c.out, "output file (directory for figure)");
        sub->add_option("--format", c.format, "csv or json")->capture_default_str();
    };

    auto* coeffs = app.add_subcommand("coeffs", "recurrence coefficients a_1..a_n");
    auto* nodes = app.add_subcommand("nodes", "Gauss rule: index,node,omega,tau");
    auto* wce = app.add_subcommand("wce", "worst-case errors of Gauss rules");
    auto* perturb = app.add_subcommand("perturb", "perturbed Gauss nodes with MZ weights");
    auto* figure = app.add_subcommand("figure", "reproduce a decay figure");
    auto* check = app.add_subcommand("check", "quick self-check");
    for (auto* sub : {coeffs, nodes, wce, perturb, figure}) common(sub);
    figure->add_option("id", c.figure, "fig1a, fig1b, fig2a, fig2b, fig3a, fig3b or fig3c")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*coeffs) return cmd_coeffs(c);
        if (*nodes) return cmd_nodes(c);
        if (*wce) return cmd_wce(c);
        if (*perturb) return cmd_perturb(c);
        if (*figure) return cmd_figure(c);
        if (*check) return cmd_check();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_validation_error(e.kind()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
