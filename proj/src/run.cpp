#include "jcm/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "jcm/exact.hpp"
#include "jcm/model_core.hpp"

namespace jcm {

namespace fs = std::filesystem;

std::vector<double> record_grid(const IntegratorOptions& opts) {
    const double h = opts.dt * opts.record_every;
    const long n = static_cast<long>(std::ceil(opts.t_max / h - 1e-9));
    std::vector<double> ts;
    ts.reserve(static_cast<size_t>(n) + 1);
    ts.push_back(0.0);
    for (long j = 1; j <= n; ++j) ts.push_back(std::min(j * h, opts.t_max));
    return ts;
}

CsvRow to_csv_row(const TrajectorySample& s) {
    return {s.t,
            s.obs.sigma3,
            s.obs.sigmaP,
            s.obs.photon,
            s.obs.energyMF,
            s.state.boson.B.real(),
            s.state.boson.B.imag(),
            s.state.boson.nu,
            s.state.fermion.p1,
            s.state.fermion.pm1};
}

namespace {

ExactState exact_initial(const RunConfig& cfg) {
    if (!cfg.coherent_excited())
        throw ConfigError(
            "exact dynamics needs the coherent-field excited-atom family "
            "(set alpha, or B0 with the other initial keys at their defaults)");
    const int n = cfg.n_max > 0 ? cfg.n_max : auto_n_max(std::abs(cfg.B0));
    return prepare_coherent_excited(cfg.B0, n);
}

CsvRow one_exact_row(const ExactState& init, const ModelParams& params, double t) {
    const ExactState st = exact_evolve(init, params, t);
    const ExactObservables eo = exact_observables(st, params);
    ExtendedBosonDensity bd;
    bd.R = eo.photon - std::norm(eo.B);
    bd.Pi = exact_pair_moment(st) - eo.B * eo.B;
    const double nu = boson_diagonalize(bd).nu;
    return {t,        eo.sigma3,    eo.sigmaP,    eo.photon,
            eo.energy, eo.B.real(), eo.B.imag(), nu,
            0.5 * (1.0 + eo.sigmaP), 0.5 * (1.0 - eo.sigmaP)};
}

}  // namespace

std::vector<CsvRow> exact_csv_rows(const RunConfig& cfg, const std::vector<double>& times) {
    const ExactState init = exact_initial(cfg);
    std::vector<CsvRow> rows;
    rows.reserve(times.size());
    for (const double t : times) rows.push_back(one_exact_row(init, cfg.params, t));
    return rows;
}

std::string format_csv_row(const CsvRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.sigma3,
                  r.sigma_p, r.photon, r.energy, r.B_re, r.B_im, r.nu, r.p1, r.pm1);
    return buf;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
    std::string out{kCsvHeader};
    out += '\n';
    for (const auto& r : rows) {
        out += format_csv_row(r);
        out += '\n';
    }
    return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    size_t pos = 0;
    int line_no = 0;
    bool header_seen = false;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kCsvHeader)
                throw JcmError("CSV line 1: unexpected header '" + std::string(line) + "'");
            header_seen = true;
            continue;
        }
        CsvRow r{};
        double* fields[] = {&r.t,     &r.sigma3, &r.sigma_p, &r.photon, &r.energy,
                            &r.B_re, &r.B_im,   &r.nu,      &r.p1,     &r.pm1};
        size_t fpos = 0;
        for (int i = 0; i < 10; ++i) {
            const auto comma = line.find(',', fpos);
            const std::string_view tok =
                line.substr(fpos, comma == std::string_view::npos ? comma : comma - fpos);
            const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *fields[i]);
            if (ec != std::errc{} || p != tok.data() + tok.size() ||
                (i < 9) != (comma != std::string_view::npos))
                throw JcmError("CSV line " + std::to_string(line_no) + ": malformed row");
            fpos = comma + 1;
        }
        rows.push_back(r);
    }
    if (!header_seen) throw JcmError("CSV input has no header");
    return rows;
}

SeriesMetrics series_metrics(const std::vector<double>& times, const std::vector<double>& abs_err,
                             double window, double threshold) {
    if (times.size() != abs_err.size() || times.empty())
        throw JcmError("metrics need matching nonempty series");
    SeriesMetrics m;
    m.horizon = times.back();
    double sum2 = 0.0;
    size_t nw = 0;
    for (size_t k = 0; k < times.size(); ++k) {
        const double e = abs_err[k];
        m.max_abs = std::max(m.max_abs, e);
        if (times[k] <= window + 1e-12) {
            sum2 += e * e;
            ++nw;
        }
        if (!m.crossed && e > threshold) {
            m.horizon = times[k];
            m.crossed = true;
        }
    }
    if (nw > 0) m.l2 = std::sqrt(sum2 / static_cast<double>(nw));
    return m;
}

double dominant_frequency(const std::vector<double>& series, double dt_sample) {
    const size_t n = series.size();
    if (n < 8) throw JcmError("series too short for a spectral estimate");
    if (!(dt_sample > 0.0)) throw JcmError("sample spacing must be positive");

    const double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                        static_cast<double>(n);
    double amp = 0.0;
    for (const double v : series) amp = std::max(amp, std::abs(v - mean));
    if (amp < 1e-12 * std::max(1.0, std::abs(mean)))
        throw JcmError("no nonzero spectral peak");

    std::vector<double> x(n);
    for (size_t k = 0; k < n; ++k) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(k) /
                                  static_cast<double>(n - 1)));
        x[k] = (series[k] - mean) * w;
    }
    const auto power = [&](double omega) {
        cplx acc{0.0, 0.0};
        const cplx rot = std::polar(1.0, -omega * dt_sample);
        cplx ph{1.0, 0.0};
        for (size_t k = 0; k < n; ++k) {
            acc += x[k] * ph;
            ph *= rot;
        }
        return std::norm(acc);
    };

    const double domega = 2.0 * M_PI / (static_cast<double>(n) * dt_sample);
    size_t best = 1;
    double best_p = -1.0;
    for (size_t m = 1; m <= n / 2; ++m) {
        const double p = power(static_cast<double>(m) * domega);
        if (p > best_p) {
            best_p = p;
            best = m;
        }
    }

    double a = static_cast<double>(best - 1) * domega;
    double b = std::min(static_cast<double>(best + 1) * domega, M_PI / dt_sample);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = power(c), fd = power(d);
    for (int it = 0; it < 64; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = power(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = power(d);
        }
    }
    return 0.5 * (a + b);
}

ComparisonReport compare_runs(const std::vector<CsvRow>& exact, const std::vector<CsvRow>& mf,
                              const std::vector<CsvRow>& coll, double window, double threshold) {
    if (exact.size() != mf.size() || exact.size() != coll.size() || exact.size() < 2)
        throw JcmError("comparison requires three runs on one grid");
    std::vector<double> times(exact.size());
    for (size_t k = 0; k < exact.size(); ++k) {
        times[k] = exact[k].t;
        if (mf[k].t != exact[k].t || coll[k].t != exact[k].t)
            throw JcmError("comparison requires identical sample grids");
    }

    ComparisonReport rep;
    rep.window = window;
    rep.horizon_threshold = threshold;
    rep.dt_sample = times[1] - times[0];
    rep.samples = exact.size();

    const auto add = [&](const std::string& name, auto&& err) {
        std::vector<double> emf(exact.size()), eco(exact.size());
        for (size_t k = 0; k < exact.size(); ++k) {
            emf[k] = err(exact[k], mf[k]);
            eco[k] = err(exact[k], coll[k]);
        }
        rep.observables.push_back({name, series_metrics(times, emf, window, threshold),
                                   series_metrics(times, eco, window, threshold)});
    };
    add("sigma3", [](const CsvRow& a, const CsvRow& b) { return std::abs(a.sigma3 - b.sigma3); });
    add("sigma_p",
        [](const CsvRow& a, const CsvRow& b) { return std::abs(a.sigma_p - b.sigma_p); });
    add("photon", [](const CsvRow& a, const CsvRow& b) { return std::abs(a.photon - b.photon); });
    add("B", [](const CsvRow& a, const CsvRow& b) {
        return std::hypot(a.B_re - b.B_re, a.B_im - b.B_im);
    });

    const auto freq_of = [&](const std::vector<CsvRow>& rows) -> std::optional<double> {
        std::vector<double> s(rows.size());
        for (size_t k = 0; k < rows.size(); ++k) s[k] = rows[k].sigma3;
        try {
            return dominant_frequency(s, rep.dt_sample);
        } catch (const JcmError&) {
            return std::nullopt;
        }
    };
    rep.freq_exact = freq_of(exact);
    rep.freq_meanfield = freq_of(mf);
    rep.freq_collisional = freq_of(coll);
    return rep;
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void append_metrics(std::string& out, const std::string& obs, const std::string& dyn,
                    const SeriesMetrics& m) {
    out += obs + "." + dyn + ".l2 = " + num(m.l2) + '\n';
    out += obs + "." + dyn + ".max_abs = " + num(m.max_abs) + '\n';
    out += obs + "." + dyn + ".horizon = " + num(m.horizon) + '\n';
    out += obs + "." + dyn + ".crossed = " + (m.crossed ? "true" : "false") + '\n';
}

}  // namespace

std::string format_report(const ComparisonReport& r) {
    std::string out;
    out += "# comparison of meanfield and collisional dynamics against the exact run\n";
    out += "# l2 is the rms error over [0, window]; horizon is the first time the\n";
    out += "# error exceeds horizon_threshold (crossed = false: never within the run)\n";
    out += "samples = " + std::to_string(r.samples) + '\n';
    out += "dt_sample = " + num(r.dt_sample) + '\n';
    out += "window = " + num(r.window) + '\n';
    out += "horizon_threshold = " + num(r.horizon_threshold) + '\n';
    const auto freq = [&](const std::string& name, const std::optional<double>& f) {
        out += "dominant_frequency." + name + " = " + (f ? num(*f) : "none") + '\n';
    };
    freq("exact", r.freq_exact);
    freq("meanfield", r.freq_meanfield);
    freq("collisional", r.freq_collisional);
    for (const auto& oc : r.observables) {
        append_metrics(out, oc.name, "meanfield", oc.meanfield);
        append_metrics(out, oc.name, "collisional", oc.collisional);
    }
    return out;
}

namespace {

class CsvSink {
public:
    explicit CsvSink(const fs::path& p) : path_(p), out_(p) {
        if (!out_) throw JcmError("cannot open output file " + p.string());
        out_ << kCsvHeader << '\n';
    }
    void add(const CsvRow& r) {
        rows_.push_back(r);
        out_ << format_csv_row(r) << '\n';
    }
    void mark_aborted(const std::string& why) {
        out_ << "# aborted: " << why << '\n';
        out_.flush();
    }
    void close() {
        out_.flush();
        if (!out_) throw JcmError("write failure on " + path_.string());
    }
    const std::vector<CsvRow>& rows() const { return rows_; }

private:
    fs::path path_;
    std::ofstream out_;
    std::vector<CsvRow> rows_;
};

std::vector<CsvRow> run_dynamics(const RunConfig& cfg, DynamicsMode mode, const fs::path& p) {
    CsvSink sink(p);
    try {
        integrate(cfg.initial_state(), cfg.params, mode, cfg.integrator, cfg.guards,
                  [&](const TrajectorySample& s) { sink.add(to_csv_row(s)); });
    } catch (const JcmError& e) {
        sink.mark_aborted(e.what());
        throw;
    }
    sink.close();
    return sink.rows();
}

std::vector<CsvRow> run_exact(const RunConfig& cfg, const std::vector<double>& times,
                              const fs::path& p) {
    CsvSink sink(p);
    try {
        const ExactState init = exact_initial(cfg);
        for (const double t : times) sink.add(one_exact_row(init, cfg.params, t));
    } catch (const JcmError& e) {
        sink.mark_aborted(e.what());
        throw;
    }
    sink.close();
    return sink.rows();
}

}  // namespace

std::vector<fs::path> run(const RunConfig& cfg) {
    const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw JcmError("cannot create output directory " + dir.string());

    std::vector<fs::path> written;
    switch (cfg.mode) {
        case RunMode::exact: {
            const fs::path p = dir / "exact.csv";
            run_exact(cfg, record_grid(cfg.integrator), p);
            written.push_back(p);
            break;
        }
        case RunMode::meanfield: {
            const fs::path p = dir / "meanfield.csv";
            run_dynamics(cfg, DynamicsMode::meanfield, p);
            written.push_back(p);
            break;
        }
        case RunMode::collisional: {
            const fs::path p = dir / "collisional.csv";
            run_dynamics(cfg, DynamicsMode::collisional, p);
            written.push_back(p);
            break;
        }
        case RunMode::compare: {
            const auto grid = record_grid(cfg.integrator);
            const fs::path pe = dir / "exact.csv";
            const fs::path pm = dir / "meanfield.csv";
            const fs::path pc = dir / "collisional.csv";
            const auto ex = run_exact(cfg, grid, pe);
            written.push_back(pe);
            const auto mf = run_dynamics(cfg, DynamicsMode::meanfield, pm);
            written.push_back(pm);
            const auto co = run_dynamics(cfg, DynamicsMode::collisional, pc);
            written.push_back(pc);
            const double window = std::min(6.0, cfg.integrator.t_max);
            const auto rep = compare_runs(ex, mf, co, window);
            const fs::path pr = dir / "report.txt";
            std::ofstream out(pr);
            if (!out) throw JcmError("cannot open output file " + pr.string());
            out << format_report(rep);
            out.flush();
            if (!out) throw JcmError("write failure on " + pr.string());
            written.push_back(pr);
            break;
        }
    }
    return written;
}

}  // namespace jcm
