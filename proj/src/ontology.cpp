#include "annorate/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "annorate/error.hpp"
#include "annorate/text.hpp"

namespace annorate
{
    OntologyGraph OntologyGraph::from_edges(std::string prefix, std::vector<std::string> terms, const std::vector<Edge>& edges)
    {
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        if (terms.empty())
        {
            throw Error(ErrorKind::EmptyOntology, "no terms for prefix '" + prefix + "'");
        }

        OntologyGraph g;
        g.m_prefix = std::move(prefix);
        g.m_names = std::move(terms);
        const std::size_t n = g.m_names.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            g.m_index.emplace(g.m_names[i], i);
        }
        g.m_parents.resize(n);
        g.m_children.resize(n);

        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& [child, parent] : edges)
        {
            auto c = g.m_index.find(child);
            auto p = g.m_index.find(parent);
            if (c == g.m_index.end() || p == g.m_index.end())
            {
                continue;
            }
            if (!seen.emplace(c->second, p->second).second)
            {
                continue;
            }
            g.m_parents[c->second].push_back(p->second);
            g.m_children[p->second].push_back(c->second);
        }
        g.m_edge_count = seen.size();

        // Kahn's algorithm from the roots downward.
        std::vector<std::size_t> pending(n);
        std::vector<std::size_t> order;
        order.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            pending[i] = g.m_parents[i].size();
            if (pending[i] == 0)
            {
                order.push_back(i);
            }
        }
        for (std::size_t head = 0; head < order.size(); ++head)
        {
            for (auto child : g.m_children[order[head]])
            {
                if (--pending[child] == 0)
                {
                    order.push_back(child);
                }
            }
        }

        if (order.size() != n)
        {
            // Every unprocessed node keeps an unprocessed parent, so walking
            // parents inside that set must revisit a node.
            std::size_t start = 0;
            while (pending[start] == 0)
            {
                ++start;
            }
            std::vector<std::size_t> walk;
            std::vector<int> position(n, -1);
            std::size_t node = start;
            while (position[node] < 0)
            {
                position[node] = static_cast<int>(walk.size());
                walk.push_back(node);
                auto& ps = g.m_parents[node];
                node = *std::find_if(ps.begin(), ps.end(), [&](std::size_t p) { return pending[p] > 0; });
            }
            std::string cycle;
            for (auto k = static_cast<std::size_t>(position[node]); k < walk.size(); ++k)
            {
                cycle += g.m_names[walk[k]] + " -> ";
            }
            cycle += g.m_names[node];
            throw Error(ErrorKind::CycleDetected, "is_a cycle: " + cycle);
        }

        g.m_depth.assign(n, 0);
        for (auto node : order)
        {
            for (auto child : g.m_children[node])
            {
                g.m_depth[child] = std::max(g.m_depth[child], g.m_depth[node] + 1);
            }
        }
        g.m_height.assign(n, 0);
        for (auto it = order.rbegin(); it != order.rend(); ++it)
        {
            for (auto parent : g.m_parents[*it])
            {
                g.m_height[parent] = std::max(g.m_height[parent], g.m_height[*it] + 1);
            }
        }
        return g;
    }

    bool OntologyGraph::contains(std::string_view term) const
    {
        return m_index.find(std::string(term)) != m_index.end();
    }

    std::size_t OntologyGraph::index_of(std::string_view term) const
    {
        auto it = m_index.find(std::string(term));
        if (it == m_index.end())
        {
            throw Error(ErrorKind::UnknownTerm, std::string(term) + " not in ontology '" + m_prefix + "'");
        }
        return it->second;
    }

    std::vector<std::string> OntologyGraph::names_of(const std::vector<std::size_t>& indices) const
    {
        std::vector<std::string> out;
        out.reserve(indices.size());
        for (auto i : indices)
        {
            out.push_back(m_names[i]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::string> OntologyGraph::terms() const
    {
        return m_names;
    }

    std::vector<std::string> OntologyGraph::roots() const
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < m_names.size(); ++i)
        {
            if (m_parents[i].empty())
            {
                out.push_back(m_names[i]);
            }
        }
        return out;
    }

    std::vector<std::string> OntologyGraph::parents(std::string_view term) const
    {
        return names_of(m_parents[index_of(term)]);
    }

    std::vector<std::string> OntologyGraph::children(std::string_view term) const
    {
        return names_of(m_children[index_of(term)]);
    }

    int OntologyGraph::depth(std::string_view term) const
    {
        return m_depth[index_of(term)];
    }

    int OntologyGraph::branch_length(std::string_view term) const
    {
        const auto i = index_of(term);
        return m_depth[i] + m_height[i];
    }

    DepthMetrics OntologyGraph::specificity(std::string_view term) const
    {
        const auto i = index_of(term);
        DepthMetrics metrics;
        metrics.depth = m_depth[i];
        metrics.branch_length = m_depth[i] + m_height[i];
        metrics.score = metrics.branch_length == 0
                            ? 1.0
                            : static_cast<double>(metrics.depth) / static_cast<double>(metrics.branch_length);
        return metrics;
    }

    std::string normalize_term_id(std::string_view id, std::string_view prefix)
    {
        id = trim(id);
        if (id.size() > prefix.size() && id.substr(0, prefix.size()) == prefix && id[prefix.size()] == '_')
        {
            return std::string(prefix) + ":" + std::string(id.substr(prefix.size() + 1));
        }
        return std::string(id);
    }

    namespace
    {
        // Value of a tag line without trailing "! comment" or "{qualifiers}".
        std::string_view tag_value(std::string_view value)
        {
            if (auto bang = value.find(" !"); bang != std::string_view::npos)
            {
                value = value.substr(0, bang);
            }
            if (auto brace = value.find(" {"); brace != std::string_view::npos)
            {
                value = value.substr(0, brace);
            }
            return trim(value);
        }

        struct Stanza
        {
            std::string id;
            std::vector<std::string> is_a;
            bool obsolete = false;
        };
    }

    OntologyGraph load_obo(std::string_view content, const std::string& prefix)
    {
        std::vector<Stanza> stanzas;
        bool in_term = false;

        std::istringstream stream{std::string(content)};
        std::string raw_line;
        while (std::getline(stream, raw_line))
        {
            std::string_view line = trim(raw_line);
            if (line.empty() || line.front() == '!')
            {
                continue;
            }
            if (line.front() == '[')
            {
                in_term = line == "[Term]";
                if (in_term)
                {
                    stanzas.emplace_back();
                }
                continue;
            }
            if (!in_term)
            {
                continue;
            }
            const auto colon = line.find(':');
            if (colon == std::string_view::npos)
            {
                continue;
            }
            const auto tag = trim(line.substr(0, colon));
            const auto value = tag_value(line.substr(colon + 1));
            auto& stanza = stanzas.back();
            if (tag == "id")
            {
                stanza.id = normalize_term_id(value, prefix);
            }
            else if (tag == "is_a")
            {
                stanza.is_a.push_back(normalize_term_id(value, prefix));
            }
            else if (tag == "is_obsolete")
            {
                stanza.obsolete = value == "true";
            }
        }

        const std::string wanted = prefix + ":";
        std::vector<std::string> terms;
        std::vector<OntologyGraph::Edge> edges;
        for (const auto& stanza : stanzas)
        {
            if (stanza.obsolete || stanza.id.rfind(wanted, 0) != 0)
            {
                continue;
            }
            terms.push_back(stanza.id);
            for (const auto& parent : stanza.is_a)
            {
                edges.emplace_back(stanza.id, parent);
            }
        }
        return OntologyGraph::from_edges(prefix, std::move(terms), edges);
    }

    OntologyGraph load_obo_file(const std::string& path, const std::string& prefix)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw Error(ErrorKind::IoError, "cannot open " + path);
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return load_obo(buffer.str(), prefix);
    }
}
