#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "htf/errors.hpp"

namespace htf {

/// Hidden-node transfer function family: the bijective tanh, or its
/// non-bijective derivative 1 - tanh^2 which peaks at the bias and inhibits
/// both low and high pre-activations.
enum class HiddenKind { Bijective, NonBijective };

/// One-hidden-layer architecture with a mixed transfer-function layer.
///
/// The first hidden nodes use tanh and the last round(mix_ratio * n_hidden)
/// nodes use 1 - tanh^2 (fixed layout, so the flat parameter order is
/// deterministic). An optional connection mask restricts which inputs feed
/// which hidden node; masked weights are structurally zero.
struct NetworkConfig {
    int n_inputs = 1;
    int n_hidden = 1;
    double mix_ratio = 0.0;        ///< fraction of hidden nodes that are non-bijective
    bool time_index_enabled = false;
    bool scaled_non_bijective = false;  ///< use 2(1 - tanh^2) - 1, expanded to [-1, 1]
    std::optional<std::vector<std::uint8_t>> connection_mask;  ///< n_hidden x n_inputs, row-major

    int n_non_bijective() const;
    HiddenKind kind_of(int hidden) const;
    bool connected(int hidden, int input) const;

    /// @throws InvalidArgument on inconsistent dimensions, mix_ratio outside
    ///         [0,1], a wrongly sized mask, or a fully masked hidden node
    void validate() const;
};

/// Trainable parameters. Masked hidden weights are stored as exact zeros.
///
/// Flat layout (the serialization and optimizer order): hidden weights
/// row-major, hidden biases, output weights, output bias.
struct Parameters {
    Eigen::MatrixXd w_hidden;  ///< n_hidden x n_inputs
    Eigen::VectorXd b_hidden;  ///< n_hidden
    Eigen::VectorXd w_out;     ///< n_hidden
    double b_out = 0.0;

    Eigen::VectorXd to_flat() const;
    static Parameters from_flat(const NetworkConfig& config, const Eigen::VectorXd& flat);
    static std::size_t flat_size(const NetworkConfig& config);
};

/// Transfer function value: tanh(z) or 1 - tanh^2(z).
double hidden_activation(HiddenKind kind, double z);

/// d/dz of the transfer function: 1 - tanh^2(z), or -2 tanh(z)(1 - tanh^2(z)).
double hidden_activation_derivative(HiddenKind kind, double z);

/// Scalar network output for one input vector of length n_inputs.
/// @throws DimensionMismatch
double forward(const NetworkConfig& config, const Parameters& params,
               std::span<const double> input);

/// Outputs for a batch of inputs (one row per sample).
Eigen::VectorXd forward_batch(const NetworkConfig& config, const Parameters& params,
                              const Eigen::MatrixXd& inputs);

/// Derivatives of the output with respect to every flat parameter, one row
/// per sample and one column per parameter. Masked weights get zero columns.
Eigen::MatrixXd jacobian(const NetworkConfig& config, const Parameters& params,
                         const Eigen::MatrixXd& inputs);

/// Seed-deterministic initialization: every weight and bias of a node drawn
/// uniformly from [-s, s] with s = 1/sqrt(fan-in of the node); masked
/// entries are exactly zero.
Parameters init_weights(const NetworkConfig& config, std::uint64_t seed);

/// Output of the heterogeneous tanh / 1 - tanh^2 pair sharing a linear input
/// u, with the non-bijective branch scaled by the asymmetry rate delta:
/// tanh(u) - tanh^2(u * delta) + 1.
double combined_response(double u, double delta);

/// Binary serialization of a network (config header + flat parameters).
/// Byte layout is documented in the README; fixed little-endian.
void save_network(std::ostream& out, const NetworkConfig& config, const Parameters& params);
std::pair<NetworkConfig, Parameters> load_network(std::istream& in);

} // namespace htf
