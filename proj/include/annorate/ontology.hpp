#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace annorate
{
    struct DepthMetrics
    {
        int depth = 0;          // edges on the longest root-to-term path
        int branch_length = 0;  // edges on the longest root-to-leaf path through the term
        double score = 1.0;     // depth / branch_length, 1 for an isolated term

        bool operator==(const DepthMetrics&) const = default;
    };

    /// Immutable is-a DAG for one ontology prefix.
    ///
    /// Depth and branch metrics are computed once at construction by dynamic
    /// programming over a topological order, so queries are lookups and the
    /// graph can be shared across threads.
    class OntologyGraph
    {
    public:
        using Edge = std::pair<std::string, std::string>;  // (child, parent)

        /// Builds a graph from explicit terms and is-a edges. Edges naming a
        /// term outside `terms` are dropped. Throws Error(CycleDetected) or
        /// Error(EmptyOntology).
        static OntologyGraph from_edges(std::string prefix, std::vector<std::string> terms, const std::vector<Edge>& edges);

        const std::string& prefix() const
        {
            return m_prefix;
        }

        std::size_t size() const
        {
            return m_names.size();
        }

        std::size_t edge_count() const
        {
            return m_edge_count;
        }

        bool contains(std::string_view term) const;

        /// Term identifiers in sorted order.
        std::vector<std::string> terms() const;
        std::vector<std::string> roots() const;
        std::vector<std::string> parents(std::string_view term) const;
        std::vector<std::string> children(std::string_view term) const;

        int depth(std::string_view term) const;
        int branch_length(std::string_view term) const;
        DepthMetrics specificity(std::string_view term) const;

    private:
        OntologyGraph() = default;

        std::size_t index_of(std::string_view term) const;
        std::vector<std::string> names_of(const std::vector<std::size_t>& indices) const;

        std::string m_prefix;
        std::vector<std::string> m_names;
        std::unordered_map<std::string, std::size_t> m_index;
        std::vector<std::vector<std::size_t>> m_parents;
        std::vector<std::vector<std::size_t>> m_children;
        std::vector<int> m_depth;
        std::vector<int> m_height;  // longest descending path to a leaf
        std::size_t m_edge_count = 0;
    };

    /// Loads `[Term]` stanzas from OBO 1.2/1.4 flat content. Only non-obsolete
    /// terms whose id carries `prefix` are kept, and only is_a edges between
    /// kept terms. Ids written as PREFIX_LOCAL are normalized to PREFIX:LOCAL.
    OntologyGraph load_obo(std::string_view content, const std::string& prefix);

    OntologyGraph load_obo_file(const std::string& path, const std::string& prefix);

    /// Normalizes PREFIX_LOCAL to PREFIX:LOCAL; other ids are returned trimmed.
    std::string normalize_term_id(std::string_view id, std::string_view prefix);
}
