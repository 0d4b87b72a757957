#ifndef RABISIM_SERIES_IO_HPP
#define RABISIM_SERIES_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rabisim/observables.hpp"

namespace rabisim {

/// Locale-independent shortest-ish representation (%.16g), used everywhere a
/// number ends up in a file so reruns are byte-comparable.
std::string format_double(double v);

/// Header: t,tau,n_mean,sigma_z,q,p_e,quanta,energy,trace_err,top_pop
/// An absent Mandel q is written as an empty field. When jump times are
/// given, a final `jumps` column holds them semicolon-joined on the first row.
void write_series_csv(std::ostream& os, const ObservableSeries& series,
                      const std::vector<double>* jump_times = nullptr);
void write_series_csv(const std::string& path, const ObservableSeries& series,
                      const std::vector<double>* jump_times = nullptr);

struct SpectrumSeries {
    std::vector<double> nu;         // angular frequency, units of the cavity frequency
    std::vector<double> magnitude;  // ensemble-averaged |DFT|, unitary normalization
};

/// Header: nu,magnitude
void write_spectrum_csv(std::ostream& os, const SpectrumSeries& spectrum);
void write_spectrum_csv(const std::string& path, const SpectrumSeries& spectrum);

} // namespace rabisim

#endif
