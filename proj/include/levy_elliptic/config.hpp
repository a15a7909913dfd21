#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levy_elliptic/integrability.hpp"
#include "levy_elliptic/levy_measure.hpp"
#include "levy_elliptic/noise_field.hpp"
#include "levy_elliptic/spectral_domain.hpp"

namespace levy_elliptic {

/// Flat run configuration. Every key can come from the JSON config file or a
/// `--set key=value` override; unknown keys are rejected.
struct RunConfig {
    HyperBox box = HyperBox::unit(1);
    LevyTriplet triplet{0.0, 0.0, AlphaStable{1.5}};
    double gamma = 1.0;
    double eps = 0.01;
    SmallJumpPolicy policy = SmallJumpPolicy::gaussianize;
    std::optional<std::size_t> K;
    std::optional<double> lambda_max;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::vector<double> u_grid{0.5, 1.0, 2.0};
    std::size_t M = 100000;
    std::vector<double> r_list{1.4, 1.6};
    std::vector<std::size_t> K_list{1024, 2048, 4096, 8192, 16384, 32768, 65536};
    std::vector<int> grid_levels{5, 6, 7, 8};
    std::size_t replicates = 50;
    OperatorMode mode = OperatorMode::spectral;
    std::string f = "indicator";
    std::string phi = "poly:0,1,-1";
    std::vector<double> t_list{100, 200, 500, 1000, 2000, 5000, 10000};
    std::vector<double> x_sample;
    bool surrogate = false;
    int blocks = 10;
    std::size_t realizations = 20;
    PsiRoute psi_route = PsiRoute::closed_form;
    bool override_existence = false;
    int workers = 0;
    int grid = 64;

    /// Eigen cutoff: lambda_max when set, else K (default 1000).
    EigenCutoff cutoff() const;
};

/// Keys accepted by the configuration, in documentation order.
const std::vector<std::string>& config_keys();

/// Builds a configuration from JSON text (may be empty) named `source` in
/// messages, then applies `key=value` overrides in order. Values of overrides
/// are read as JSON when they parse, as a number list when comma-separated
/// numbers, else as a plain string. Throws ConfigError with a
/// "<source>:<line>: ..." or "--set <key>: ..." prefix.
RunConfig load_config(const std::string& json_text, const std::string& source, const std::vector<std::string>& overrides);

}  // namespace levy_elliptic
