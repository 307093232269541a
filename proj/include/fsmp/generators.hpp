#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fsmp/error.hpp"
#include "fsmp/graph.hpp"

namespace fsmp {

enum class GeneratorKind { Cycle, Complete, Path, Torus, Cartesian, File };

/// Parsed description of a graph to synthesise.
///
/// Grammar: `cycle:K`, `complete:N`, `path:K`, `torus:K1,K2,...`,
/// `cartesian(<spec>,<spec>)`, `file:PATH`.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Cycle;
    std::vector<std::size_t> params;
    std::vector<GeneratorSpec> operands; ///< exactly two for Cartesian
    std::string path;

    static GeneratorSpec cycle(std::size_t k) { return {GeneratorKind::Cycle, {k}, {}, {}}; }
    static GeneratorSpec complete(std::size_t n) { return {GeneratorKind::Complete, {n}, {}, {}}; }
    static GeneratorSpec path_graph(std::size_t k) { return {GeneratorKind::Path, {k}, {}, {}}; }
    static GeneratorSpec torus(std::vector<std::size_t> dims) { return {GeneratorKind::Torus, std::move(dims), {}, {}}; }
    static GeneratorSpec file(std::string p) { return {GeneratorKind::File, {}, {}, std::move(p)}; }
    static GeneratorSpec cartesian(GeneratorSpec g, GeneratorSpec h)
    {
        GeneratorSpec s{GeneratorKind::Cartesian, {}, {}, {}};
        s.operands.push_back(std::move(g));
        s.operands.push_back(std::move(h));
        return s;
    }

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

inline std::string to_string(const GeneratorSpec& spec)
{
    auto join = [](const std::vector<std::size_t>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i)
                s += ',';
            s += std::to_string(xs[i]);
        }
        return s;
    };
    switch (spec.kind) {
    case GeneratorKind::Cycle: return "cycle:" + join(spec.params);
    case GeneratorKind::Complete: return "complete:" + join(spec.params);
    case GeneratorKind::Path: return "path:" + join(spec.params);
    case GeneratorKind::Torus: return "torus:" + join(spec.params);
    case GeneratorKind::File: return "file:" + spec.path;
    case GeneratorKind::Cartesian:
        return "cartesian(" + to_string(spec.operands.at(0)) + "," + to_string(spec.operands.at(1)) + ")";
    }
    return {};
}

namespace detail {

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    GeneratorSpec parse_all()
    {
        GeneratorSpec spec = parse();
        if (pos_ != text_.size())
            fail("unexpected trailing input '" + std::string(text_.substr(pos_)) + "'");
        return spec;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw Error(ErrorKind::InvalidSpec, why + " in '" + std::string(text_) + "'");
    }

    std::string_view word()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void expect(char c)
    {
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "' at offset " + std::to_string(pos_));
        ++pos_;
    }

    std::size_t number()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::string_view digits = text_.substr(start, pos_ - start);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
            std::size_t end = start;
            while (end < text_.size() && text_[end] != ',' && text_[end] != ')')
                ++end;
            fail("bad number '" + std::string(text_.substr(start, end - start)) + "'");
        }
        return value;
    }

    std::vector<std::size_t> number_list()
    {
        std::vector<std::size_t> xs{number()};
        // Inside cartesian(...) a comma may also separate operands; a digit must follow to continue the list.
        while (pos_ + 1 < text_.size() && text_[pos_] == ','
            && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            xs.push_back(number());
        }
        return xs;
    }

    GeneratorSpec parse()
    {
        std::size_t start = pos_;
        std::string_view kind = word();
        if (kind == "cartesian") {
            expect('(');
            GeneratorSpec g = parse();
            expect(',');
            GeneratorSpec h = parse();
            expect(')');
            return GeneratorSpec::cartesian(std::move(g), std::move(h));
        }
        if (kind == "file") {
            expect(':');
            std::size_t path_start = pos_;
            // A file path runs to the end, or to the operand delimiter inside cartesian(...).
            while (pos_ < text_.size() && (depth_hint() == 0 || (text_[pos_] != ',' && text_[pos_] != ')')))
                ++pos_;
            if (pos_ == path_start)
                fail("empty file path");
            return GeneratorSpec::file(std::string(text_.substr(path_start, pos_ - path_start)));
        }
        GeneratorSpec spec;
        if (kind == "cycle")
            spec.kind = GeneratorKind::Cycle;
        else if (kind == "complete")
            spec.kind = GeneratorKind::Complete;
        else if (kind == "path")
            spec.kind = GeneratorKind::Path;
        else if (kind == "torus")
            spec.kind = GeneratorKind::Torus;
        else {
            std::size_t end = start;
            while (end < text_.size() && text_[end] != ':' && text_[end] != '(' && text_[end] != ','
                && text_[end] != ')')
                ++end;
            fail("unknown generator '" + std::string(text_.substr(start, end - start)) + "'");
        }
        expect(':');
        spec.params = number_list();
        if (spec.kind != GeneratorKind::Torus && spec.params.size() != 1)
            fail("'" + std::string(kind) + "' takes exactly one parameter");
        return spec;
    }

    int depth_hint() const
    {
        int depth = 0;
        for (std::size_t i = 0; i < pos_; ++i) {
            if (text_[i] == '(')
                ++depth;
            else if (text_[i] == ')')
                --depth;
        }
        return depth;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline GeneratorSpec parse_generator_spec(std::string_view text)
{
    return detail::SpecParser(text).parse_all();
}

/// Throws InvalidSpec when a size constraint is violated.
inline void validate(const GeneratorSpec& spec)
{
    auto bad = [&](const std::string& why) { throw Error(ErrorKind::InvalidSpec, to_string(spec) + ": " + why); };
    switch (spec.kind) {
    case GeneratorKind::Cycle:
        if (spec.params.size() != 1 || spec.params[0] < 3)
            bad("cycle length must be at least 3");
        break;
    case GeneratorKind::Complete:
        if (spec.params.size() != 1 || spec.params[0] < 1)
            bad("complete graph order must be at least 1");
        break;
    case GeneratorKind::Path:
        if (spec.params.size() != 1 || spec.params[0] < 1)
            bad("path length must be at least 1");
        break;
    case GeneratorKind::Torus:
        if (spec.params.size() < 2)
            bad("torus needs at least 2 dimensions");
        for (std::size_t k : spec.params)
            if (k < 3)
                bad("every torus dimension must be at least 3");
        break;
    case GeneratorKind::Cartesian:
        if (spec.operands.size() != 2)
            bad("cartesian product takes two operands");
        validate(spec.operands[0]);
        validate(spec.operands[1]);
        break;
    case GeneratorKind::File:
        if (spec.path.empty())
            bad("empty file path");
        break;
    }
}

inline Graph cycle_graph(std::size_t k)
{
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < k; ++i)
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % k));
    return build_graph(k, std::span<const Edge>(edges));
}

inline Graph complete_graph(std::size_t n)
{
    std::vector<Edge> edges;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            edges.emplace_back(a, b);
    return Graph::from_sorted_edges(n, std::move(edges));
}

inline Graph path_graph(std::size_t k)
{
    std::vector<Edge> edges;
    for (Vertex i = 0; i + 1 < k; ++i)
        edges.emplace_back(i, i + 1);
    return Graph::from_sorted_edges(k, std::move(edges));
}

/// Torus C_{k1} x ... x C_{kn}; vertex u1..un is labelled sum(u_i * prod_{j>i} k_j).
inline Graph torus_graph(std::span<const std::size_t> dims)
{
    std::size_t n = 1;
    for (std::size_t k : dims)
        n *= k;
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;)
        stride[i - 1] = stride[i] * dims[i];
    std::vector<Edge> edges;
    edges.reserve(n * dims.size());
    for (std::size_t label = 0; label < n; ++label) {
        for (std::size_t j = 0; j < dims.size(); ++j) {
            std::size_t coord = (label / stride[j]) % dims[j];
            std::size_t next = label - coord * stride[j] + ((coord + 1) % dims[j]) * stride[j];
            edges.emplace_back(static_cast<Vertex>(label), static_cast<Vertex>(next));
        }
    }
    return build_graph(n, std::span<const Edge>(edges));
}

/// G x H with (g, h) labelled g * |V(H)| + h.
inline Graph cartesian_product(const Graph& g, const Graph& h)
{
    if (g.empty() || h.empty())
        throw Error(ErrorKind::EmptyGraph, "cartesian product with an empty operand");
    const std::size_t nh = h.vertex_count();
    const std::size_t n = g.vertex_count() * nh;
    std::vector<Edge> edges;
    edges.reserve(g.vertex_count() * h.edge_count() + nh * g.edge_count());
    for (std::size_t a = 0; a < g.vertex_count(); ++a)
        for (const Edge& e : h.edges())
            edges.emplace_back(static_cast<Vertex>(a * nh + e.u), static_cast<Vertex>(a * nh + e.v));
    for (const Edge& e : g.edges())
        for (std::size_t b = 0; b < nh; ++b)
            edges.emplace_back(static_cast<Vertex>(e.u * nh + b), static_cast<Vertex>(e.v * nh + b));
    std::sort(edges.begin(), edges.end());
    return Graph::from_sorted_edges(n, std::move(edges));
}

inline Graph generate(const GeneratorSpec& spec)
{
    validate(spec);
    switch (spec.kind) {
    case GeneratorKind::Cycle: return cycle_graph(spec.params[0]);
    case GeneratorKind::Complete: return complete_graph(spec.params[0]);
    case GeneratorKind::Path: return path_graph(spec.params[0]);
    case GeneratorKind::Torus: return torus_graph(spec.params);
    case GeneratorKind::Cartesian: return cartesian_product(generate(spec.operands[0]), generate(spec.operands[1]));
    case GeneratorKind::File: return load_edge_list(spec.path);
    }
    throw Error(ErrorKind::InvalidSpec, "unknown generator kind");
}

inline Graph generate(std::string_view spec_text) { return generate(parse_generator_spec(spec_text)); }

} // namespace fsmp
