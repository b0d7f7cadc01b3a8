#include "wavkan/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "wavkan/artifacts.hpp"
#include "wavkan/error.hpp"

namespace wavkan {

namespace {

constexpr const char* kMagic = "wavkan-checkpoint";
constexpr int kVersion = 1;

void write_values(std::ostream& os, const char* tag, std::span<const double> values) {
    os << tag;
    for (double v : values) os << ' ' << format_double(v);
    os << '\n';
}

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    // Next line split into whitespace tokens; the first token must be `tag`.
    std::vector<std::string> expect(const std::string& tag) {
        std::string line;
        do {
            if (!std::getline(is_, line)) fail("unexpected end of file, expected '" + tag + "'");
            ++line_no_;
        } while (!line.empty() && line.front() == '#');
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string tok; ss >> tok;) tokens.push_back(tok);
        if (tokens.empty() || tokens.front() != tag) fail("expected '" + tag + "'");
        tokens.erase(tokens.begin());
        return tokens;
    }

    double number(const std::string& tok) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("bad number '" + tok + "'");
        return v;
    }

    std::uint64_t integer(const std::string& tok) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("bad integer '" + tok + "'");
        return v;
    }

    std::vector<double> numbers(const std::string& tag, std::size_t expected) {
        const auto toks = expect(tag);
        if (toks.size() != expected)
            fail("'" + tag + "' holds " + std::to_string(toks.size()) + " values, expected " + std::to_string(expected));
        std::vector<double> out;
        out.reserve(toks.size());
        for (const auto& t : toks) out.push_back(number(t));
        return out;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::Io, "checkpoint line " + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istream& is_;
    std::size_t line_no_ = 0;
};

MotherWavelet read_wavelet(LineReader& in) {
    const auto toks = in.expect("wavelet");
    if (toks.empty()) in.fail("missing wavelet kind");
    const WaveletKind kind = wavelet_kind_from_string(toks[0]);
    auto param = [&](std::size_t i) {
        if (i >= toks.size()) in.fail("missing wavelet parameter");
        return in.number(toks[i]);
    };
    switch (kind) {
        case WaveletKind::Morlet: return MotherWavelet::morlet(param(1), param(2));
        case WaveletKind::Shannon: return MotherWavelet::shannon(param(1), param(2));
        case WaveletKind::MexicanHat: return MotherWavelet::mexican_hat(param(1));
        case WaveletKind::DoG: return MotherWavelet::dog(param(1));
    }
    in.fail("unknown wavelet");
}

Matrix read_matrix(LineReader& in, const char* tag, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    const auto values = in.numbers(tag, rows * cols);
    std::copy(values.begin(), values.end(), m.flat().begin());
    return m;
}

}  // namespace

void save_checkpoint(std::ostream& os, const WavKanNet& net) {
    const auto& w = net.wavelet();
    os << kMagic << ' ' << kVersion << '\n';
    os << "wavelet " << to_string(w.kind());
    switch (w.kind()) {
        case WaveletKind::Morlet: os << ' ' << format_double(w.a()) << ' ' << format_double(w.b()); break;
        case WaveletKind::Shannon: os << ' ' << format_double(w.omega1()) << ' ' << format_double(w.omega2()); break;
        case WaveletKind::MexicanHat:
        case WaveletKind::DoG: os << ' ' << format_double(w.sigma()); break;
    }
    os << '\n';
    os << "shape";
    for (std::size_t n : net.shape()) os << ' ' << n;
    os << '\n';
    os << "policy " << to_string(net.policy()) << '\n';
    os << "seed " << net.seed() << '\n';
    os << "translation_domain " << format_double(net.translation_domain().lo) << ' '
       << format_double(net.translation_domain().hi) << '\n';
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const auto& layer = net.layer(l);
        os << "layer " << l << ' ' << layer.trainable_W << ' ' << layer.trainable_T << ' ' << layer.trainable_S
           << '\n';
        write_values(os, "W", layer.W.flat());
        write_values(os, "T", layer.T.flat());
        write_values(os, "S", layer.S.flat());
    }
    const ParamVector params = flatten(net);
    os << "params " << params.values.size();
    for (double v : params.values) os << ' ' << format_double(v);
    os << "\nend\n";
}

void save_checkpoint(const std::filesystem::path& path, const WavKanNet& net) {
    std::ofstream os(path);
    if (!os) throw Error(Errc::Io, "cannot open '" + path.string() + "' for writing");
    save_checkpoint(os, net);
    if (!os) throw Error(Errc::Io, "failed writing '" + path.string() + "'");
}

WavKanNet load_checkpoint(std::istream& is) {
    LineReader in(is);
    const auto header = in.expect(kMagic);
    if (header.size() != 1 || in.integer(header[0]) != static_cast<std::uint64_t>(kVersion))
        in.fail("unsupported checkpoint version");
    MotherWavelet wavelet = read_wavelet(in);

    std::vector<std::size_t> shape;
    for (const auto& t : in.expect("shape")) shape.push_back(static_cast<std::size_t>(in.integer(t)));
    if (shape.size() < 2) in.fail("shape needs at least two entries");

    const auto policy_tok = in.expect("policy");
    if (policy_tok.size() != 1) in.fail("policy takes one value");
    const InitPolicy policy = init_policy_from_string(policy_tok[0]);
    const auto seed_tok = in.expect("seed");
    if (seed_tok.size() != 1) in.fail("seed takes one value");
    const std::uint64_t seed = in.integer(seed_tok[0]);
    const auto dom = in.numbers("translation_domain", 2);

    std::vector<WavKanLayer> layers;
    for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
        const auto flags = in.expect("layer");
        if (flags.size() != 4 || in.integer(flags[0]) != l) in.fail("bad layer record");
        WavKanLayer layer;
        layer.trainable_W = in.integer(flags[1]) != 0;
        layer.trainable_T = in.integer(flags[2]) != 0;
        layer.trainable_S = in.integer(flags[3]) != 0;
        layer.W = read_matrix(in, "W", shape[l + 1], shape[l]);
        layer.T = read_matrix(in, "T", shape[l + 1], shape[l]);
        layer.S = read_matrix(in, "S", shape[l + 1], shape[l]);
        layers.push_back(std::move(layer));
    }
    WavKanNet net(std::move(wavelet), shape, std::move(layers), policy, seed, Interval{dom[0], dom[1]});

    const auto params_tok = in.expect("params");
    if (params_tok.empty()) in.fail("params needs a count");
    const std::size_t count = static_cast<std::size_t>(in.integer(params_tok[0]));
    if (params_tok.size() != count + 1) in.fail("params count does not match its values");
    ParamVector stored;
    for (std::size_t k = 1; k < params_tok.size(); ++k) stored.values.push_back(in.number(params_tok[k]));
    if (stored != flatten(net))
        throw Error(Errc::LayoutMismatch, "stored parameter vector disagrees with the stored layers");
    (void)in.expect("end");
    return net;
}

WavKanNet load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
    return load_checkpoint(is);
}

}  // namespace wavkan
