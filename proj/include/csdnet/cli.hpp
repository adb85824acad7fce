#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csdnet/analysis.hpp"
#include "csdnet/assembly.hpp"
#include "csdnet/benchmarks.hpp"
#include "csdnet/csv.hpp"
#include "csdnet/errors.hpp"
#include "csdnet/form_finding.hpp"
#include "csdnet/model.hpp"
#include "csdnet/model_io.hpp"

// Command-line front end.
//
//   formfind   --model M [--sigma-des N] [--sigma-min N] [--out CSV] [--write-model JSON]
//   modal      --model M [--nl 0] [--nt 0] --modes K [--out CSV]
//   freqresp   --model M [--nl] [--nt] --force-node N --force-dir D --amplitude F0
//              --probe-node N --probe-dir D --f-min F --f-max F --samples K [--out CSV]
//   transient  --model M [--nl] [--nt] --force-node N --force-dir D --amplitude F0
//              --frequency F --t-end T [--dt DT] --probe N:D [--probe N:D ...] [--out CSV]
//   emit-bench --name bench_planar|bench_paraboloid_demo --out JSON
//   validate   --model M
//
// M is a model file path or a built-in benchmark name. Exit codes: 0 success,
// 1 usage or validation error, 2 numerical failure.

namespace csdnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

inline CableNetModel resolve_model(const std::string& source) {
    if (std::filesystem::exists(source)) return load_model(source);
    for (const auto& name : benchmark_names())
        if (source == name) return emit_benchmark(name);
    throw ParseError("cannot open model file " + source);
}

inline DofRef parse_probe(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
        throw ValidationError("probe \"" + text + "\" must look like NODE:DIR, e.g. 1:y");
    int node = 0;
    try {
        std::size_t used = 0;
        node = std::stoi(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ValidationError("probe \"" + text + "\": bad node id");
    }
    return {node, parse_axis(text.substr(colon + 1))};
}

namespace detail {

inline void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw ValidationError("cannot write " + path);
    write(file);
    if (!file) throw ValidationError("failed writing " + path);
}

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cable-net dynamics with Cartesian spatial discretization elements", "csdnet"};
    app.require_subcommand(1);

    std::string model_arg, out_path;
    int nl = 0, nt = 0;
    auto add_model = [&](CLI::App* sub) { sub->add_option("--model", model_arg, "model file or benchmark name")->required(); };
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--nl", nl, "longitudinal internal terms per member")->capture_default_str();
        sub->add_option("--nt", nt, "transverse internal terms per direction")->capture_default_str();
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "output file (default: stdout)"); };

    std::optional<double> sigma_des, sigma_min;
    std::string write_model_path;
    auto* formfind = app.add_subcommand("formfind", "tension distribution for fixed nodal positions");
    add_model(formfind);
    formfind->add_option("--sigma-des", sigma_des, "uniform desired tension, N (default: current tensions)");
    formfind->add_option("--sigma-min", sigma_min, "lower tension bound, N");
    formfind->add_option("--write-model", write_model_path, "write the model with the designed tensions");
    add_out(formfind);

    int n_modes = 0;
    auto* modal_cmd = app.add_subcommand("modal", "natural frequencies");
    add_model(modal_cmd);
    add_config(modal_cmd);
    modal_cmd->add_option("--modes", n_modes, "number of modes")->required();
    add_out(modal_cmd);

    int force_node = 0, probe_node = 0, samples = 0;
    std::string force_dir, probe_dir;
    double amplitude = 0.0, f_min = 0.0, f_max = 0.0, frequency = 0.0, t_end = 0.0;
    std::optional<double> dt;
    std::vector<std::string> probes;
    auto add_force = [&](CLI::App* sub) {
        sub->add_option("--force-node", force_node, "loaded node id")->required();
        sub->add_option("--force-dir", force_dir, "load direction x|y|z")->required();
        sub->add_option("--amplitude", amplitude, "load amplitude F0, N")->required();
    };

    auto* freqresp = app.add_subcommand("freqresp", "undamped harmonic response sweep");
    add_model(freqresp);
    add_config(freqresp);
    add_force(freqresp);
    freqresp->add_option("--probe-node", probe_node, "probed node id")->required();
    freqresp->add_option("--probe-dir", probe_dir, "probed direction x|y|z")->required();
    freqresp->add_option("--f-min", f_min, "lowest frequency, Hz")->required();
    freqresp->add_option("--f-max", f_max, "highest frequency, Hz")->required();
    freqresp->add_option("--samples", samples, "number of grid frequencies")->required();
    add_out(freqresp);

    auto* transient_cmd = app.add_subcommand("transient", "forced response from rest (Newmark)");
    add_model(transient_cmd);
    add_config(transient_cmd);
    add_force(transient_cmd);
    transient_cmd->add_option("--frequency", frequency, "load frequency, Hz")->required();
    transient_cmd->add_option("--t-end", t_end, "simulated time, s")->required();
    transient_cmd->add_option("--dt", dt, "time step, s (default 1/(200 f))");
    transient_cmd->add_option("--probe", probes, "probed coordinate NODE:DIR (repeatable)")->required();
    add_out(transient_cmd);

    std::string bench_name;
    auto* emit_cmd = app.add_subcommand("emit-bench", "write a built-in benchmark model");
    emit_cmd->add_option("--name", bench_name, "bench_planar | bench_paraboloid_demo")->required();
    emit_cmd->add_option("--out", out_path, "model file to write")->required();

    auto* validate_cmd = app.add_subcommand("validate", "check a model and report its equilibrium residual");
    add_model(validate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto parsed = app.get_subcommands();
        err << (parsed.empty() ? app.help() : parsed.front()->help());
        return kExitValidation;
    }

    try {
        const CsdConfig config{nl, nt};
        if (*formfind) {
            const CableNetModel model = resolve_model(model_arg);
            const Eigen::Index n = static_cast<Eigen::Index>(model.members().size());
            if (sigma_des) detail::require_finite(*sigma_des, "--sigma-des");
            const Eigen::VectorXd target = sigma_des ? Eigen::VectorXd(Eigen::VectorXd::Constant(n, *sigma_des))
                                                     : model.tensions();
            const TensionDesign design = find_tensions(model, target, sigma_min);
            detail::emit(out_path, out, [&](std::ostream& os) { csv::write_tensions(os, model, design); });
            if (!write_model_path.empty())
                save_model(model.with_tensions({design.sigma.data(), static_cast<std::size_t>(n)}), write_model_path);
        } else if (*modal_cmd) {
            const CableNetModel model = resolve_model(model_arg);
            const ModalResult modes = modal(model, config, n_modes);
            detail::emit(out_path, out, [&](std::ostream& os) { csv::write_modal(os, modes); });
        } else if (*freqresp) {
            detail::require_finite(amplitude, "--amplitude");
            const CableNetModel model = resolve_model(model_arg);
            const PointForce load{force_node, parse_axis(force_dir), amplitude, 0.0};
            const DofRef probe{probe_node, parse_axis(probe_dir)};
            const ResponseTrace trace = frequency_response(model, config, load, {&probe, 1}, f_min, f_max, samples);
            detail::emit(out_path, out, [&](std::ostream& os) { csv::write_frequency_response(os, trace); });
        } else if (*transient_cmd) {
            detail::require_finite(amplitude, "--amplitude");
            detail::require_finite(frequency, "--frequency");
            const CableNetModel model = resolve_model(model_arg);
            const PointForce load{force_node, parse_axis(force_dir), amplitude, frequency};
            std::vector<DofRef> refs;
            for (const auto& p : probes) refs.push_back(parse_probe(p));
            const ResponseTrace trace = transient(model, config, load, t_end, dt, refs);
            detail::emit(out_path, out, [&](std::ostream& os) { csv::write_transient(os, trace); });
        } else if (*emit_cmd) {
            save_model(emit_benchmark(bench_name), out_path);
        } else if (*validate_cmd) {
            const CableNetModel model = resolve_model(model_arg);
            const auto residual = equilibrium_residual(model);
            out << "dimension " << model.dimension() << "\n"
                << "nodes " << model.nodes().size() << " (free " << model.free_node_count() << ")\n"
                << "members " << model.members().size() << "\n"
                << "max_equilibrium_residual_n " << csv::number(max_residual_norm(residual)) << "\n";
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

// Convenience overload; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"csdnet"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace csdnet::cli
