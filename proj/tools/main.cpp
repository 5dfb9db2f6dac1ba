// cmbp command line front end: simulation, reconstruction and kernel
// inspection for the circular-means / wave-trace pipeline. Talks to the
// library exclusively through the C interface.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmbp.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& msg)
{
    throw CliError{code, msg};
}

int exit_code_for(cmbp_status st)
{
    switch (st) {
        case CMBP_OK:
            return 0;
        case CMBP_ERR_INVALID_ARGUMENT:
        case CMBP_ERR_FORMAT:
            return kExitUsage;
        case CMBP_ERR_IO:
            return kExitIo;
        default:
            return kExitNumeric;
    }
}

void check(cmbp_status st)
{
    if (st != CMBP_OK)
        die(exit_code_for(st), cmbp_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    ~Handle() { Free(p); }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    T** out() { return &p; }
    T* get() const { return p; }
};

using Domain = Handle<cmbp_domain, cmbp_domain_free>;
using PhantomH = Handle<cmbp_phantom, cmbp_phantom_free>;
using Image = Handle<cmbp_image, cmbp_image_free>;
using Series = Handle<cmbp_series, cmbp_series_free>;

struct Config {
    std::string domain_file;
    std::string phantom_file;
    std::string data_file;
    std::string out_dir = "out";
    std::string formula = "wave-b";
    std::string sample = "exact";
    std::string dump_profiles;
    int nb = 256;
    int nr = 1024;
    int nt = 2048;
    int nang = 512;
    int grid = 128;
    int f_grid = 128;
    int bumps = 3;
    int directions = 1024;
    double da_factor = 1e-3;
    double tmax_factor = 8.0;
    double margin_pixels = 2.0;
    double bump_margin = 0.25;
    unsigned long long seed = 42;
    int threads = 0;
};

void validate_counts(const Config& c)
{
    for (int v : {c.nb, c.nr, c.nt, c.nang, c.grid, c.f_grid})
        if (v < 8)
            die(kExitUsage, "all grid counts must be at least 8");
    if (c.tmax_factor < 2.0)
        die(kExitUsage, "--tmax-factor must be at least 2");
    if (c.sample != "exact" && c.sample != "grid")
        die(kExitUsage, "--sample must be 'exact' or 'grid'");
}

cmbp_formula parse_formula(const std::string& name)
{
    if (name == "wave-a")
        return CMBP_FORMULA_WAVE_A;
    if (name == "wave-b")
        return CMBP_FORMULA_WAVE_B;
    if (name == "means-a")
        return CMBP_FORMULA_MEANS_A;
    if (name == "means-b")
        return CMBP_FORMULA_MEANS_B;
    die(kExitUsage, "--formula must be one of wave-a|wave-b|means-a|means-b");
}

void ensure_out_dir(const Config& c)
{
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec)
        die(kExitIo, "cannot create output directory '" + c.out_dir + "'");
}

void append_meta(const Config& c, const char* cmd, json extra)
{
    json rec{{"cmd", cmd},
             {"domain", c.domain_file},
             {"nb", c.nb},
             {"nr", c.nr},
             {"nt", c.nt},
             {"nang", c.nang},
             {"grid", c.grid},
             {"tmax_factor", c.tmax_factor},
             {"margin_pixels", c.margin_pixels},
             {"seed", c.seed},
             {"threads", c.threads},
             {"sample", c.sample},
             {"version", cmbp_version()}};
    rec.update(extra);
    std::ofstream out(fs::path(c.out_dir) / "meta.jsonl", std::ios::app);
    if (!out)
        die(kExitIo, "cannot append run metadata");
    out << rec.dump() << '\n';
}

void load_domain(const Config& c, Domain& dom)
{
    if (c.domain_file.empty())
        die(kExitUsage, "--domain FILE is required");
    check(cmbp_domain_load(c.domain_file.c_str(), c.nb, dom.out()));
}

void load_phantom(const Config& c, PhantomH& ph)
{
    if (c.phantom_file.empty())
        die(kExitUsage, "--phantom FILE is required");
    check(cmbp_phantom_load(c.phantom_file.c_str(), ph.out()));
}

double domain_tmax(const Config& c, const Domain& dom)
{
    double dia = 0.0;
    check(cmbp_domain_diameter(dom.get(), &dia));
    return c.tmax_factor * dia;
}

std::string out_path(const Config& c, const char* name)
{
    return (fs::path(c.out_dir) / name).string();
}

void simulate_files(const Config& c, const Domain& dom, const PhantomH& ph,
                    std::string& means_path, std::string& wave_path)
{
    Series means;
    if (c.sample == "grid") {
        Image f;
        check(cmbp_rasterize(ph.get(), dom.get(), c.f_grid, 2.0, f.out()));
        check(cmbp_simulate_means_grid(dom.get(), f.get(), c.nr, c.nang, c.threads,
                                       means.out()));
    } else {
        check(cmbp_simulate_means(dom.get(), ph.get(), c.nr, c.nang, c.threads, means.out()));
    }
    Series wave;
    check(cmbp_wave_from_means(means.get(), c.nt, domain_tmax(c, dom), c.threads, wave.out()));

    means_path = out_path(c, "means.bser");
    wave_path = out_path(c, "wave.bser");
    check(cmbp_series_save(means.get(), means_path.c_str()));
    check(cmbp_series_save(wave.get(), wave_path.c_str()));
}

json metrics_json(const Config& c, const Domain& dom, const Image& recon, const PhantomH& ref)
{
    Image reference;
    check(cmbp_rasterize(ref.get(), dom.get(), c.grid, 0.0, reference.out()));
    double l2 = 0.0, linf = 0.0;
    check(cmbp_error_metrics(recon.get(), reference.get(), dom.get(), c.margin_pixels, &l2,
                             &linf));
    return json{{"rel_l2", l2}, {"rel_linf", linf}};
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        die(kExitIo, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

int cmd_simulate(const Config& c)
{
    validate_counts(c);
    Domain dom;
    PhantomH ph;
    load_domain(c, dom);
    load_phantom(c, ph);
    ensure_out_dir(c);
    std::string means_path, wave_path;
    simulate_files(c, dom, ph, means_path, wave_path);
    append_meta(c, "simulate",
                json{{"phantom", c.phantom_file},
                     {"outputs", {means_path, wave_path}},
                     {"t_max", domain_tmax(c, dom)}});
    std::printf("wrote %s and %s\n", means_path.c_str(), wave_path.c_str());
    return 0;
}

int cmd_reconstruct(const Config& c)
{
    validate_counts(c);
    Domain dom;
    load_domain(c, dom);
    ensure_out_dir(c);

    const cmbp_formula formula = parse_formula(c.formula);
    const bool wants_wave =
        formula == CMBP_FORMULA_WAVE_A || formula == CMBP_FORMULA_WAVE_B;
    std::string data_path = c.data_file;
    if (data_path.empty())
        data_path = out_path(c, wants_wave ? "wave.bser" : "means.bser");

    Series data;
    check(cmbp_series_load(data_path.c_str(), data.out()));

    Image recon;
    check(cmbp_reconstruct(dom.get(), data.get(), formula, c.grid, c.margin_pixels, c.threads,
                           recon.out()));
    const std::string recon_path = out_path(c, "recon.grid2");
    check(cmbp_image_save(recon.get(), recon_path.c_str()));

    json meta{{"formula", c.formula}, {"data", data_path}, {"outputs", {recon_path}}};
    if (!c.phantom_file.empty()) {
        PhantomH ref;
        load_phantom(c, ref);
        const json m = metrics_json(c, dom, recon, ref);
        write_json(out_path(c, "metrics.json"), m);
        meta["metrics"] = m;
        std::printf("rel_l2 %.6f rel_linf %.6f\n", m["rel_l2"].get<double>(),
                    m["rel_linf"].get<double>());
    }
    append_meta(c, "reconstruct", meta);
    std::printf("wrote %s\n", recon_path.c_str());
    return 0;
}

int cmd_kernel(const Config& c)
{
    validate_counts(c);
    Domain dom;
    PhantomH ph;
    load_domain(c, dom);
    load_phantom(c, ph);
    ensure_out_dir(c);

    cmbp_residual_params par;
    cmbp_residual_params_init(&par);
    par.n_radii = c.nr;
    par.n_angles = c.nang;
    par.n_times = c.nt;
    par.tmax_factor = c.tmax_factor;
    par.grid_n = c.grid;
    par.f_grid_n = c.f_grid;
    par.margin_pixels = c.margin_pixels;
    par.directions = c.directions;
    par.da_factor = c.da_factor;
    par.threads = c.threads;

    Image residual, kernel_field;
    double gap = 0.0;
    check(cmbp_residual_vs_kernel(dom.get(), ph.get(), &par, residual.out(),
                                  kernel_field.out(), &gap));
    const std::string res_path = out_path(c, "residual.grid2");
    const std::string ker_path = out_path(c, "kernel_field.grid2");
    check(cmbp_image_save(residual.get(), res_path.c_str()));
    check(cmbp_image_save(kernel_field.get(), ker_path.c_str()));
    write_json(out_path(c, "gap.json"),
               json{{"rel_gap", gap}, {"directions", c.directions}, {"da_factor", c.da_factor}});

    if (!c.dump_profiles.empty()) {
        std::error_code ec;
        fs::create_directories(c.dump_profiles, ec);
        if (ec)
            die(kExitIo, "cannot create profile dump directory");
        check(cmbp_kernel_dump_profiles(dom.get(), c.directions, c.da_factor, 16,
                                        c.dump_profiles.c_str()));
    }
    append_meta(c, "kernel",
                json{{"phantom", c.phantom_file},
                     {"f_grid", c.f_grid},
                     {"directions", c.directions},
                     {"da_factor", c.da_factor},
                     {"rel_gap", gap},
                     {"outputs", {res_path, ker_path}}});
    std::printf("rel_gap %.6f\n", gap);
    return 0;
}

int cmd_phantom(const Config& c)
{
    Domain dom;
    load_domain(c, dom);
    PhantomH ph;
    check(cmbp_phantom_random(dom.get(), c.bumps, c.seed, c.bump_margin, ph.out()));
    const std::string path = c.phantom_file.empty() ? "phantom.txt" : c.phantom_file;
    check(cmbp_phantom_save(ph.get(), path.c_str()));
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_roundtrip(const Config& c)
{
    validate_counts(c);
    Domain dom;
    PhantomH ph;
    load_domain(c, dom);
    load_phantom(c, ph);
    ensure_out_dir(c);

    std::string means_path, wave_path;
    simulate_files(c, dom, ph, means_path, wave_path);

    const cmbp_formula formula = parse_formula(c.formula);
    const bool wants_wave =
        formula == CMBP_FORMULA_WAVE_A || formula == CMBP_FORMULA_WAVE_B;
    Series data;
    check(cmbp_series_load((wants_wave ? wave_path : means_path).c_str(), data.out()));
    Image recon;
    check(cmbp_reconstruct(dom.get(), data.get(), formula, c.grid, c.margin_pixels, c.threads,
                           recon.out()));
    const std::string recon_path = out_path(c, "recon.grid2");
    check(cmbp_image_save(recon.get(), recon_path.c_str()));

    const json m = metrics_json(c, dom, recon, ph);
    write_json(out_path(c, "metrics.json"), m);
    append_meta(c, "roundtrip",
                json{{"phantom", c.phantom_file},
                     {"formula", c.formula},
                     {"metrics", m},
                     {"outputs", {means_path, wave_path, recon_path}}});
    std::printf("rel_l2 %.6f rel_linf %.6f\n", m["rel_l2"].get<double>(),
                m["rel_linf"].get<double>());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"circular-means / wave-trace back-projection toolkit"};
    app.require_subcommand(1);
    Config c;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--domain", c.domain_file, "domain spec file");
        sub->add_option("--phantom", c.phantom_file, "phantom spec file");
        sub->add_option("--formula", c.formula, "wave-a|wave-b|means-a|means-b");
        sub->add_option("--nb", c.nb, "boundary nodes");
        sub->add_option("--nr", c.nr, "radial samples");
        sub->add_option("--nt", c.nt, "time samples");
        sub->add_option("--nang", c.nang, "angular quadrature nodes");
        sub->add_option("--grid", c.grid, "reconstruction lattice size");
        sub->add_option("--fgrid", c.f_grid, "initial-data lattice size");
        sub->add_option("--tmax-factor", c.tmax_factor, "recording horizon in diameters");
        sub->add_option("--margin", c.margin_pixels, "boundary margin in pixels");
        sub->add_option("--seed", c.seed, "random seed");
        sub->add_option("--threads", c.threads, "worker threads (0 = auto)");
        sub->add_option("--out", c.out_dir, "output directory");
        sub->add_option("--sample", c.sample, "phantom sampling: exact|grid");
        return sub;
    };

    CLI::App* simulate = add_common(app.add_subcommand("simulate", "write means/wave tables"));
    CLI::App* reconstruct =
        add_common(app.add_subcommand("reconstruct", "back-project recorded tables"));
    reconstruct->add_option("--data", c.data_file, "input .bser file (defaults into --out)");
    CLI::App* kernel = add_common(
        app.add_subcommand("kernel", "smoothing-kernel field and reconstruction residual"));
    kernel->add_option("--ndir", c.directions, "kernel direction cache size");
    kernel->add_option("--da-factor", c.da_factor, "kernel offset step / support width");
    kernel->add_option("--dump-profiles", c.dump_profiles, "dump per-direction tables here");
    CLI::App* phantom = add_common(app.add_subcommand("phantom", "generate a random phantom"));
    phantom->add_option("--bumps", c.bumps, "number of bumps");
    phantom->add_option("--bump-margin", c.bump_margin, "distance kept from the boundary");
    CLI::App* roundtrip =
        add_common(app.add_subcommand("roundtrip", "simulate + reconstruct + metrics"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(c);
        if (reconstruct->parsed())
            return cmd_reconstruct(c);
        if (kernel->parsed())
            return cmd_kernel(c);
        if (phantom->parsed())
            return cmd_phantom(c);
        if (roundtrip->parsed())
            return cmd_roundtrip(c);
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitUsage;
}
