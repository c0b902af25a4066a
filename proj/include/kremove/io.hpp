#pragma once

#include "kremove/embedding.hpp"
#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/tree.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace kremove {

namespace detail {

/// Whitespace-separated integer reader that remembers line and column for error messages.
class TokenReader {
  public:
    TokenReader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    long long next_int(const char *what) {
        skip();
        if (pos_ >= text_.size())
            fail(std::string("expected ") + what + ", found end of input");
        const int line = line_, column = column_;
        std::size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+')
            advance();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            advance();
        if (start == pos_ || (pos_ - start == 1 && !std::isdigit(static_cast<unsigned char>(text_[start]))) ||
            (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))))
            throw ParseError(source_, line, column, std::string("expected ") + what);
        try {
            return std::stoll(std::string(text_.substr(start, pos_ - start)));
        } catch (const std::out_of_range &) {
            throw ParseError(source_, line, column, std::string(what) + " out of range");
        }
    }

    [[noreturn]] void fail(const std::string &what) const { throw ParseError(source_, line_, column_, what); }
    /// Position of the next token.
    int line() {
        skip();
        return line_;
    }
    int column() {
        skip();
        return column_;
    }

  private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }
    void skip() {
        while (pos_ < text_.size()) {
            if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path, 0, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Edge lists: "n m" then m lines "u v". '#' starts a comment.

inline Graph parse_edge_list(std::string_view text, const std::string &source = "<input>") {
    detail::TokenReader in(text, source);
    const long long n = in.next_int("vertex count");
    if (n < 0 || n > 1'000'000)
        in.fail("vertex count out of range");
    const long long m = in.next_int("edge count");
    if (m < 0)
        in.fail("negative edge count");
    std::vector<Edge> edges;
    for (long long i = 0; i < m; ++i) {
        const int line = in.line(), column = in.column();
        const long long u = in.next_int("edge endpoint");
        const long long v = in.next_int("edge endpoint");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError(source, line, column, "endpoint outside 0.." + std::to_string(n - 1));
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (!in.at_end())
        in.fail("trailing data after " + std::to_string(m) + " edges");
    try {
        return Graph::from_edges(static_cast<int>(n), edges);
    } catch (const std::invalid_argument &e) {
        throw ParseError(source, 0, 0, e.what());
    }
}

inline std::string write_edge_list(const Graph &g) {
    std::string out = std::to_string(g.order()) + " " + std::to_string(g.size()) + "\n";
    for (auto [u, v] : g.edges())
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// graph6

inline Graph parse_graph6(std::string_view line, const std::string &source = "<graph6>", int line_no = 1) {
    if (line.starts_with(">>graph6<<"))
        line.remove_prefix(10);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
        line.remove_suffix(1);
    std::size_t pos = 0;
    auto byte = [&](const char *what) -> int {
        if (pos >= line.size())
            throw ParseError(source, line_no, static_cast<int>(pos) + 1, std::string("truncated ") + what);
        const int c = static_cast<unsigned char>(line[pos]);
        if (c < 63 || c > 126)
            throw ParseError(source, line_no, static_cast<int>(pos) + 1, "byte outside the graph6 range");
        ++pos;
        return c - 63;
    };
    long long n = byte("order");
    if (n == 63) {
        int parts = 3;
        if (pos < line.size() && line[pos] == '~') {
            ++pos;
            parts = 6;
        }
        n = 0;
        for (int i = 0; i < parts; ++i)
            n = (n << 6) | byte("order");
    }
    if (n > 100'000)
        throw ParseError(source, line_no, 1, "graph too large");
    std::vector<Edge> edges;
    int bits = 0, value = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            if (bits == 0) {
                value = byte("adjacency");
                bits = 6;
            }
            --bits;
            if ((value >> bits) & 1)
                edges.emplace_back(i, j);
        }
    if (pos != line.size())
        throw ParseError(source, line_no, static_cast<int>(pos) + 1, "trailing bytes");
    return Graph::from_edges(static_cast<int>(n), edges);
}

inline std::string write_graph6(const Graph &g) {
    std::string out;
    const long long n = g.order();
    if (n < 63) {
        out += static_cast<char>(n + 63);
    } else if (n < 258048) {
        out += '~';
        for (int s = 12; s >= 0; s -= 6)
            out += static_cast<char>(((n >> s) & 63) + 63);
    } else {
        out += "~~";
        for (int s = 30; s >= 0; s -= 6)
            out += static_cast<char>(((n >> s) & 63) + 63);
    }
    int bits = 0, value = 0;
    for (Vertex j = 1; j < n; ++j)
        for (Vertex i = 0; i < j; ++i) {
            value = (value << 1) | (g.adjacent(i, j) ? 1 : 0);
            if (++bits == 6) {
                out += static_cast<char>(value + 63);
                bits = value = 0;
            }
        }
    if (bits > 0)
        out += static_cast<char>((value << (6 - bits)) + 63);
    return out;
}

/// One graph per non-empty line.
inline std::vector<Graph> parse_graph6_corpus(std::string_view text, const std::string &source = "<corpus>") {
    std::vector<Graph> out;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        while (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!line.empty())
            out.push_back(parse_graph6(line, source, line_no));
    }
    return out;
}

inline std::vector<Graph> load_graph6_corpus(const std::string &path) {
    return parse_graph6_corpus(detail::read_file(path), path);
}

/// Edge list, or graph6 when the name ends in .g6 / .graph6.
inline Graph load_graph(const std::string &path) {
    const std::string text = detail::read_file(path);
    if (detail::ends_with(path, ".g6") || detail::ends_with(path, ".graph6")) {
        auto graphs = parse_graph6_corpus(text, path);
        if (graphs.size() != 1)
            throw ParseError(path, 1, 1, "expected exactly one graph, found " + std::to_string(graphs.size()));
        return graphs.front();
    }
    return parse_edge_list(text, path);
}

// ---------------------------------------------------------------------------
// Trees: "m r" then m-1 lines "child parent".

inline RootedTree parse_tree(std::string_view text, const std::string &source = "<tree>") {
    detail::TokenReader in(text, source);
    const long long m = in.next_int("tree order");
    if (m < 1 || m > 1'000'000)
        in.fail("tree order must be positive");
    const long long root = in.next_int("root");
    if (root < 0 || root >= m)
        in.fail("root outside 0.." + std::to_string(m - 1));
    std::vector<Vertex> parent(static_cast<std::size_t>(m), kNoVertex);
    for (long long i = 0; i + 1 < m; ++i) {
        const int line = in.line(), column = in.column();
        const long long c = in.next_int("child");
        const long long p = in.next_int("parent");
        if (c < 0 || p < 0 || c >= m || p >= m)
            throw ParseError(source, line, column, "vertex outside 0.." + std::to_string(m - 1));
        if (c == root || parent[static_cast<std::size_t>(c)] != kNoVertex)
            throw ParseError(source, line, column, "vertex " + std::to_string(c) + " given a second parent");
        parent[static_cast<std::size_t>(c)] = static_cast<Vertex>(p);
    }
    if (!in.at_end())
        in.fail("trailing data after " + std::to_string(m - 1) + " parent lines");
    try {
        return RootedTree::from_parents(std::move(parent));
    } catch (const std::invalid_argument &e) {
        throw ParseError(source, 0, 0, e.what());
    }
}

inline std::string write_tree(const RootedTree &t) {
    std::string out = std::to_string(t.order()) + " " + std::to_string(t.root()) + "\n";
    for (Vertex v = 0; v < t.order(); ++v)
        if (v != t.root())
            out += std::to_string(v) + " " + std::to_string(t.parent(v)) + "\n";
    return out;
}

inline RootedTree load_tree(const std::string &path) { return parse_tree(detail::read_file(path), path); }

// ---------------------------------------------------------------------------
// Embeddings as JSON objects {"tree vertex": host vertex}.

inline nlohmann::json embedding_to_json(const Embedding &phi) {
    nlohmann::json out = nlohmann::json::object();
    for (Vertex x = 0; x < phi.order(); ++x)
        out[std::to_string(x)] = phi[x];
    return out;
}

/// Accepts the bare object or any object with an "embedding" member holding one.
inline Embedding embedding_from_json(const nlohmann::json &j, int tree_order, const std::string &source = "<json>") {
    const nlohmann::json &body = j.is_object() && j.contains("embedding") ? j.at("embedding") : j;
    if (!body.is_object())
        throw ParseError(source, 1, 1, "embedding must be a JSON object");
    Embedding phi(tree_order);
    for (const auto &[key, value] : body.items()) {
        std::size_t used = 0;
        int x = -1;
        try {
            x = std::stoi(key, &used);
        } catch (const std::exception &) {
        }
        if (used != key.size() || x < 0 || x >= tree_order)
            throw ParseError(source, 1, 1, "bad tree vertex key \"" + key + "\"");
        if (!value.is_number_integer())
            throw ParseError(source, 1, 1, "host vertex for " + key + " is not an integer");
        phi[x] = value.get<Vertex>();
    }
    return phi;
}

inline Embedding load_embedding(const std::string &path, int tree_order) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path, 1, static_cast<int>(e.byte), e.what());
    }
    return embedding_from_json(j, tree_order, path);
}

} // namespace kremove
