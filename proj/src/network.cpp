#include "htf/network.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "binary_io.hpp"

namespace htf {

namespace {

double uniform_symmetric(std::mt19937_64& gen, double bound) {
    // 53-bit mantissa draw, keeps the stream identical across standard
    // library implementations.
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * bound;
}

double activation_value(const NetworkConfig& config, HiddenKind kind, double z) {
    if (kind == HiddenKind::NonBijective && config.scaled_non_bijective) {
        const double t = std::tanh(z);
        return 2.0 * (1.0 - t * t) - 1.0;
    }
    return hidden_activation(kind, z);
}

double activation_derivative(const NetworkConfig& config, HiddenKind kind, double z) {
    if (kind == HiddenKind::NonBijective && config.scaled_non_bijective) {
        const double t = std::tanh(z);
        return -4.0 * t * (1.0 - t * t);
    }
    return hidden_activation_derivative(kind, z);
}

Eigen::MatrixXd effective_hidden_weights(const NetworkConfig& config, const Parameters& params) {
    if (!config.connection_mask) {
        return params.w_hidden;
    }
    Eigen::MatrixXd w = params.w_hidden;
    for (int j = 0; j < config.n_hidden; ++j) {
        for (int i = 0; i < config.n_inputs; ++i) {
            if (!config.connected(j, i)) {
                w(j, i) = 0.0;
            }
        }
    }
    return w;
}

void check_dims(const NetworkConfig& config, const Parameters& params) {
    if (params.w_hidden.rows() != config.n_hidden || params.w_hidden.cols() != config.n_inputs ||
        params.b_hidden.size() != config.n_hidden || params.w_out.size() != config.n_hidden) {
        throw DimensionMismatch("parameters do not match the network configuration");
    }
}

using detail::read_f64;
using detail::read_u32;
using detail::read_u64;
using detail::write_bytes;
using detail::write_f64;
using detail::write_u32;
using detail::write_u64;

constexpr std::uint32_t kNetworkMagic = 0x4e465448;  // "HTFN" little-endian
constexpr std::uint32_t kNetworkVersion = 1;

} // namespace

int NetworkConfig::n_non_bijective() const {
    return static_cast<int>(std::lround(mix_ratio * n_hidden));
}

HiddenKind NetworkConfig::kind_of(int hidden) const {
    return hidden >= n_hidden - n_non_bijective() ? HiddenKind::NonBijective
                                                  : HiddenKind::Bijective;
}

bool NetworkConfig::connected(int hidden, int input) const {
    if (!connection_mask) {
        return true;
    }
    return (*connection_mask)[static_cast<std::size_t>(hidden) * n_inputs + input] != 0;
}

void NetworkConfig::validate() const {
    if (n_inputs < 1 || n_hidden < 1) {
        throw InvalidArgument("network needs at least one input and one hidden node");
    }
    if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0)) {
        throw InvalidArgument("mix_ratio must lie in [0, 1]");
    }
    if (connection_mask) {
        if (connection_mask->size() !=
            static_cast<std::size_t>(n_hidden) * static_cast<std::size_t>(n_inputs)) {
            throw InvalidArgument("connection mask must be n_hidden x n_inputs");
        }
        for (int j = 0; j < n_hidden; ++j) {
            bool any = false;
            for (int i = 0; i < n_inputs; ++i) {
                any = any || connected(j, i);
            }
            if (!any) {
                throw InvalidArgument("hidden node " + std::to_string(j) +
                                      " has no remaining connection");
            }
        }
    }
}

std::size_t Parameters::flat_size(const NetworkConfig& config) {
    const std::size_t h = static_cast<std::size_t>(config.n_hidden);
    const std::size_t n = static_cast<std::size_t>(config.n_inputs);
    return h * n + h + h + 1;
}

Eigen::VectorXd Parameters::to_flat() const {
    const Eigen::Index h = w_hidden.rows();
    const Eigen::Index n = w_hidden.cols();
    Eigen::VectorXd flat(h * n + 2 * h + 1);
    Eigen::Index q = 0;
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            flat(q++) = w_hidden(j, i);
        }
    }
    flat.segment(q, h) = b_hidden;
    q += h;
    flat.segment(q, h) = w_out;
    q += h;
    flat(q) = b_out;
    return flat;
}

Parameters Parameters::from_flat(const NetworkConfig& config, const Eigen::VectorXd& flat) {
    if (static_cast<std::size_t>(flat.size()) != flat_size(config)) {
        throw DimensionMismatch("flat parameter vector has the wrong length");
    }
    const Eigen::Index h = config.n_hidden;
    const Eigen::Index n = config.n_inputs;
    Parameters p;
    p.w_hidden.resize(h, n);
    Eigen::Index q = 0;
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            p.w_hidden(j, i) = config.connected(static_cast<int>(j), static_cast<int>(i))
                                   ? flat(q)
                                   : 0.0;
            ++q;
        }
    }
    p.b_hidden = flat.segment(q, h);
    q += h;
    p.w_out = flat.segment(q, h);
    q += h;
    p.b_out = flat(q);
    return p;
}

double hidden_activation(HiddenKind kind, double z) {
    const double t = std::tanh(z);
    return kind == HiddenKind::Bijective ? t : 1.0 - t * t;
}

double hidden_activation_derivative(HiddenKind kind, double z) {
    const double t = std::tanh(z);
    const double sech2 = 1.0 - t * t;
    return kind == HiddenKind::Bijective ? sech2 : -2.0 * t * sech2;
}

double forward(const NetworkConfig& config, const Parameters& params,
               std::span<const double> input) {
    check_dims(config, params);
    if (input.size() != static_cast<std::size_t>(config.n_inputs)) {
        throw DimensionMismatch("input length does not match n_inputs");
    }
    double out = params.b_out;
    for (int j = 0; j < config.n_hidden; ++j) {
        double z = params.b_hidden(j);
        for (int i = 0; i < config.n_inputs; ++i) {
            if (config.connected(j, i)) {
                z += params.w_hidden(j, i) * input[static_cast<std::size_t>(i)];
            }
        }
        out += params.w_out(j) * activation_value(config, config.kind_of(j), z);
    }
    return out;
}

Eigen::VectorXd forward_batch(const NetworkConfig& config, const Parameters& params,
                              const Eigen::MatrixXd& inputs) {
    check_dims(config, params);
    if (inputs.cols() != config.n_inputs) {
        throw DimensionMismatch("batch width does not match n_inputs");
    }
    const Eigen::MatrixXd w = effective_hidden_weights(config, params);
    Eigen::MatrixXd z = inputs * w.transpose();
    z.rowwise() += params.b_hidden.transpose();
    for (int j = 0; j < config.n_hidden; ++j) {
        const HiddenKind kind = config.kind_of(j);
        for (Eigen::Index s = 0; s < z.rows(); ++s) {
            z(s, j) = activation_value(config, kind, z(s, j));
        }
    }
    return (z * params.w_out).array() + params.b_out;
}

Eigen::MatrixXd jacobian(const NetworkConfig& config, const Parameters& params,
                         const Eigen::MatrixXd& inputs) {
    check_dims(config, params);
    if (inputs.rows() == 0) {
        throw EmptyDataset("jacobian needs a nonempty batch");
    }
    if (inputs.cols() != config.n_inputs) {
        throw DimensionMismatch("batch width does not match n_inputs");
    }
    const Eigen::Index n_samples = inputs.rows();
    const Eigen::Index h = config.n_hidden;
    const Eigen::Index n = config.n_inputs;
    const Eigen::MatrixXd w = effective_hidden_weights(config, params);

    Eigen::MatrixXd z = inputs * w.transpose();
    z.rowwise() += params.b_hidden.transpose();
    Eigen::MatrixXd act(n_samples, h);
    Eigen::MatrixXd deriv(n_samples, h);
    for (Eigen::Index j = 0; j < h; ++j) {
        const HiddenKind kind = config.kind_of(static_cast<int>(j));
        for (Eigen::Index s = 0; s < n_samples; ++s) {
            act(s, j) = activation_value(config, kind, z(s, j));
            deriv(s, j) = activation_derivative(config, kind, z(s, j));
        }
    }

    Eigen::MatrixXd jac(n_samples, static_cast<Eigen::Index>(Parameters::flat_size(config)));
    for (Eigen::Index j = 0; j < h; ++j) {
        const Eigen::VectorXd gate = params.w_out(j) * deriv.col(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            jac.col(j * n + i) = config.connected(static_cast<int>(j), static_cast<int>(i))
                                     ? gate.cwiseProduct(inputs.col(i)).eval()
                                     : Eigen::VectorXd::Zero(n_samples).eval();
        }
        jac.col(h * n + j) = gate;          // hidden bias
        jac.col(h * n + h + j) = act.col(j);  // output weight
    }
    jac.col(h * n + 2 * h).setOnes();  // output bias
    return jac;
}

Parameters init_weights(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 gen(seed);
    const Eigen::Index h = config.n_hidden;
    const Eigen::Index n = config.n_inputs;

    std::vector<double> bound(static_cast<std::size_t>(h));
    for (Eigen::Index j = 0; j < h; ++j) {
        int fan_in = 0;
        for (int i = 0; i < n; ++i) {
            fan_in += config.connected(static_cast<int>(j), i) ? 1 : 0;
        }
        bound[static_cast<std::size_t>(j)] = 1.0 / std::sqrt(static_cast<double>(fan_in));
    }

    Parameters p;
    p.w_hidden.resize(h, n);
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            p.w_hidden(j, i) = config.connected(static_cast<int>(j), static_cast<int>(i))
                                   ? uniform_symmetric(gen, bound[static_cast<std::size_t>(j)])
                                   : 0.0;
        }
    }
    p.b_hidden.resize(h);
    for (Eigen::Index j = 0; j < h; ++j) {
        p.b_hidden(j) = uniform_symmetric(gen, bound[static_cast<std::size_t>(j)]);
    }
    const double out_bound = 1.0 / std::sqrt(static_cast<double>(h));
    p.w_out.resize(h);
    for (Eigen::Index j = 0; j < h; ++j) {
        p.w_out(j) = uniform_symmetric(gen, out_bound);
    }
    p.b_out = uniform_symmetric(gen, out_bound);
    return p;
}

double combined_response(double u, double delta) {
    const double t = std::tanh(u * delta);
    return std::tanh(u) - t * t + 1.0;
}

void save_network(std::ostream& out, const NetworkConfig& config, const Parameters& params) {
    config.validate();
    check_dims(config, params);
    write_u32(out, kNetworkMagic);
    write_u32(out, kNetworkVersion);
    write_u32(out, static_cast<std::uint32_t>(config.n_inputs));
    write_u32(out, static_cast<std::uint32_t>(config.n_hidden));
    write_f64(out, config.mix_ratio);
    std::uint32_t flags = 0;
    if (config.time_index_enabled) flags |= 1u;
    if (config.scaled_non_bijective) flags |= 2u;
    if (config.connection_mask) flags |= 4u;
    write_u32(out, flags);
    if (config.connection_mask) {
        const std::size_t n_bits = config.connection_mask->size();
        std::vector<unsigned char> packed((n_bits + 7) / 8, 0);
        for (std::size_t k = 0; k < n_bits; ++k) {
            if ((*config.connection_mask)[k]) {
                packed[k / 8] |= static_cast<unsigned char>(1u << (k % 8));
            }
        }
        write_bytes(out, packed.data(), packed.size());
    }
    const Eigen::VectorXd flat = params.to_flat();
    write_u64(out, static_cast<std::uint64_t>(flat.size()));
    for (Eigen::Index q = 0; q < flat.size(); ++q) {
        write_f64(out, flat(q));
    }
    if (!out) {
        throw IoError("failed to write network");
    }
}

std::pair<NetworkConfig, Parameters> load_network(std::istream& in) {
    if (read_u32(in) != kNetworkMagic) {
        throw ParseError("not a network file");
    }
    if (read_u32(in) != kNetworkVersion) {
        throw ParseError("unsupported network version");
    }
    NetworkConfig config;
    config.n_inputs = static_cast<int>(read_u32(in));
    config.n_hidden = static_cast<int>(read_u32(in));
    config.mix_ratio = read_f64(in);
    const std::uint32_t flags = read_u32(in);
    config.time_index_enabled = (flags & 1u) != 0;
    config.scaled_non_bijective = (flags & 2u) != 0;
    if ((flags & 4u) != 0) {
        const std::size_t n_bits =
            static_cast<std::size_t>(config.n_hidden) * static_cast<std::size_t>(config.n_inputs);
        std::vector<unsigned char> packed((n_bits + 7) / 8);
        in.read(reinterpret_cast<char*>(packed.data()),
                static_cast<std::streamsize>(packed.size()));
        if (!in) throw IoError("unexpected end of network stream");
        std::vector<std::uint8_t> mask(n_bits, 0);
        for (std::size_t k = 0; k < n_bits; ++k) {
            mask[k] = (packed[k / 8] >> (k % 8)) & 1u;
        }
        config.connection_mask = std::move(mask);
    }
    config.validate();
    const std::uint64_t n_params = read_u64(in);
    if (n_params != Parameters::flat_size(config)) {
        throw ParseError("parameter count does not match the network header");
    }
    Eigen::VectorXd flat(static_cast<Eigen::Index>(n_params));
    for (Eigen::Index q = 0; q < flat.size(); ++q) {
        flat(q) = read_f64(in);
    }
    return {config, Parameters::from_flat(config, flat)};
}

} // namespace htf
