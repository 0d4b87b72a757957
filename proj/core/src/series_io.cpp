#include "rabisim/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace rabisim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

namespace {

void write_series_body(std::ostream& os, const ObservableSeries& series,
                       const std::vector<double>* jump_times) {
    os << "t,tau,n_mean,sigma_z,q,p_e,quanta,energy,trace_err,top_pop";
    if (jump_times) os << ",jumps";
    os << "\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& r = series[k];
        os << format_double(r.t) << ',' << format_double(r.tau) << ','
           << format_double(r.n_mean) << ',' << format_double(r.sigma_z_mean) << ','
           << (r.mandel_q ? format_double(*r.mandel_q) : std::string{}) << ','
           << format_double(r.p_e) << ',' << format_double(r.quanta_mean) << ','
           << format_double(r.energy_mean) << ',' << format_double(r.trace_error) << ','
           << format_double(r.top_level_pop);
        if (jump_times) {
            os << ',';
            if (k == 0) {
                for (std::size_t j = 0; j < jump_times->size(); ++j) {
                    if (j) os << ';';
                    os << format_double((*jump_times)[j]);
                }
            }
        }
        os << "\n";
    }
}

} // namespace

void write_series_csv(std::ostream& os, const ObservableSeries& series,
                      const std::vector<double>* jump_times) {
    write_series_body(os, series, jump_times);
}

void write_series_csv(const std::string& path, const ObservableSeries& series,
                      const std::vector<double>* jump_times) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_series_body(os, series, jump_times);
}

void write_spectrum_csv(std::ostream& os, const SpectrumSeries& spectrum) {
    os << "nu,magnitude\n";
    for (std::size_t k = 0; k < spectrum.nu.size(); ++k) {
        os << format_double(spectrum.nu[k]) << ',' << format_double(spectrum.magnitude[k])
           << "\n";
    }
}

void write_spectrum_csv(const std::string& path, const SpectrumSeries& spectrum) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_spectrum_csv(os, spectrum);
}

} // namespace rabisim
