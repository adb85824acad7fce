#pragma once

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "csdnet/analysis.hpp"
#include "csdnet/form_finding.hpp"
#include "csdnet/model.hpp"

namespace csdnet::csv {

// 9 significant digits, printf %g style ("inf" for the resonance sentinel).
inline std::string number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void write_modal(std::ostream& os, const ModalResult& modes) {
    os << "mode,freq_hz\n";
    for (Eigen::Index i = 0; i < modes.frequencies_hz.size(); ++i)
        os << (i + 1) << ',' << number(modes.frequencies_hz[i]) << '\n';
}

// One probe per file; the flag column is SampleStatus (0 ok, 1 ill-conditioned, 2 resonant).
inline void write_frequency_response(std::ostream& os, const ResponseTrace& trace, std::size_t probe = 0) {
    if (probe >= trace.values.size()) throw std::out_of_range("frequency response probe index");
    os << "freq_hz,amplitude_m,resonant_flag\n";
    for (std::size_t k = 0; k < trace.abscissa.size(); ++k)
        os << number(trace.abscissa[k]) << ',' << number(trace.values[probe][k]) << ','
           << static_cast<int>(trace.status[k]) << '\n';
}

inline void write_transient(std::ostream& os, const ResponseTrace& trace) {
    os << "time_s";
    for (const auto& l : trace.labels) os << ',' << l;
    os << '\n';
    for (std::size_t k = 0; k < trace.abscissa.size(); ++k) {
        os << number(trace.abscissa[k]);
        for (const auto& series : trace.values) os << ',' << number(series[k]);
        os << '\n';
    }
}

inline void write_tensions(std::ostream& os, const CableNetModel& model, const TensionDesign& design) {
    os << "member,sigma_des_n,sigma_n,at_bound\n";
    for (std::size_t j = 0; j < model.members().size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        os << model.members()[j].id << ',' << number(design.sigma_des[i]) << ',' << number(design.sigma[i]) << ','
           << (design.at_bound(j) ? 1 : 0) << '\n';
    }
}

}  // namespace csdnet::csv
