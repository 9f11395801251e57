#include "mrpp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace mrpp {

Graph::Graph(int vertex_count) {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    adjacency_.resize(static_cast<std::size_t>(vertex_count));
}

Graph Graph::from_edges(int vertex_count, std::span<const std::pair<Vertex, Vertex>> edges) {
    Graph g(vertex_count);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

void Graph::add_edge(Vertex u, Vertex v) {
    if (!valid(u) || !valid(v)) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    auto& au = adjacency_[static_cast<std::size_t>(u)];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return;
    au.insert(it, v);
    auto& av = adjacency_[static_cast<std::size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edge_count_;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    if (!valid(u) || !valid(v)) return false;
    auto n = neighbors(u);
    return std::binary_search(n.begin(), n.end(), v);
}

std::size_t GridMap::passable_count() const {
    return static_cast<std::size_t>(std::count(passable.begin(), passable.end(), true));
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = end + 1;
    }
    return lines;
}

int parse_header_int(std::string_view line, std::string_view key) {
    if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != ' ')
        throw ParseError("map header: expected '" + std::string(key) + " <n>', got '" + std::string(line) + "'");
    auto rest = line.substr(key.size() + 1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || value <= 0)
        throw ParseError("map header: bad value in '" + std::string(line) + "'");
    return value;
}

}  // namespace

GridMap parse_map(std::string_view text) {
    auto lines = split_lines(text);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < 4) throw ParseError("map: truncated header");
    if (lines[0].substr(0, 5) != "type ") throw ParseError("map header: missing 'type' line");

    GridMap map;
    map.height = parse_header_int(lines[1], "height");
    map.width = parse_header_int(lines[2], "width");
    if (lines[3] != "map") throw ParseError("map header: missing 'map' line");

    const std::size_t rows = lines.size() - 4;
    if (rows != static_cast<std::size_t>(map.height))
        throw ParseError("map: declared height " + std::to_string(map.height) + " but found " +
                         std::to_string(rows) + " rows");

    map.passable.assign(static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height), false);
    for (int y = 0; y < map.height; ++y) {
        auto row = lines[4 + static_cast<std::size_t>(y)];
        if (row.size() != static_cast<std::size_t>(map.width))
            throw ParseError("map: row " + std::to_string(y) + " has length " + std::to_string(row.size()) +
                             ", expected " + std::to_string(map.width));
        for (int x = 0; x < map.width; ++x) {
            switch (row[static_cast<std::size_t>(x)]) {
                case '.': case 'G': case 'S':
                    map.passable[map.cell(x, y)] = true;
                    break;
                case '@': case 'O': case 'T': case 'W':
                    break;
                default:
                    throw ParseError(std::string("map: unknown cell character '") + row[static_cast<std::size_t>(x)] +
                                     "' at row " + std::to_string(y));
            }
        }
    }
    return map;
}

std::string format_map(const GridMap& map) {
    std::ostringstream out;
    out << "type octile\nheight " << map.height << "\nwidth " << map.width << "\nmap\n";
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) out << (map.passable[map.cell(x, y)] ? '.' : '@');
        out << '\n';
    }
    return out.str();
}

Vertex GridGraph::vertex_at(const GridMap& map, int x, int y) const {
    if (!map.in_bounds(x, y)) return kNoVertex;
    return cell_to_vertex[map.cell(x, y)];
}

GridGraph grid_to_graph(const GridMap& map) {
    GridGraph result;
    result.cell_to_vertex.assign(map.passable.size(), kNoVertex);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x)
            if (map.passable[map.cell(x, y)]) {
                result.cell_to_vertex[map.cell(x, y)] = static_cast<Vertex>(result.vertex_to_xy.size());
                result.vertex_to_xy.emplace_back(x, y);
            }

    result.graph = Graph(static_cast<int>(result.vertex_to_xy.size()));
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            Vertex v = result.vertex_at(map, x, y);
            if (v == kNoVertex) continue;
            if (Vertex right = result.vertex_at(map, x + 1, y); right != kNoVertex) result.graph.add_edge(v, right);
            if (Vertex down = result.vertex_at(map, x, y + 1); down != kNoVertex) result.graph.add_edge(v, down);
        }
    return result;
}

}  // namespace mrpp
