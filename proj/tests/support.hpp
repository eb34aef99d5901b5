#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <unistd.h>

#include "annorate/ontology.hpp"

namespace annorate::testing
{
    inline std::filesystem::path fixture_dir()
    {
        return ANNORATE_FIXTURE_DIR;
    }

    inline std::filesystem::path data_dir()
    {
        return ANNORATE_DATA_DIR;
    }

    inline std::string read_file(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    /// Fresh directory under the system temp dir, removed on destruction.
    class TempDir
    {
    public:
        TempDir()
        {
            static std::atomic<int> counter{0};
            m_path = std::filesystem::temp_directory_path()
                     / ("annorate-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
            std::filesystem::remove_all(m_path);
            std::filesystem::create_directories(m_path);
        }

        ~TempDir()
        {
            std::error_code ec;
            std::filesystem::remove_all(m_path, ec);
        }

        TempDir(const TempDir&) = delete;
        TempDir& operator=(const TempDir&) = delete;

        const std::filesystem::path& path() const
        {
            return m_path;
        }

    private:
        std::filesystem::path m_path;
    };

    /// httplib server on an ephemeral localhost port, stopped on destruction.
    class MockServer
    {
    public:
        explicit MockServer(const std::function<void(httplib::Server&)>& routes)
        {
            routes(m_server);
            m_port = m_server.bind_to_any_port("127.0.0.1");
            m_thread = std::thread([this] { m_server.listen_after_bind(); });
            m_server.wait_until_ready();
        }

        ~MockServer()
        {
            m_server.stop();
            if (m_thread.joinable())
            {
                m_thread.join();
            }
        }

        std::string url() const
        {
            return "http://127.0.0.1:" + std::to_string(m_port);
        }

    private:
        httplib::Server m_server;
        int m_port = 0;
        std::thread m_thread;
    };

    struct RandomDag
    {
        std::vector<std::string> terms;
        std::vector<OntologyGraph::Edge> edges;  // (child, parent)
    };

    /// Random DAG on up to `max_nodes` nodes: edges only run from a lower to
    /// a higher position in a shuffled order, so no cycle is possible.
    inline RandomDag random_dag(std::mt19937& rng, int max_nodes)
    {
        std::uniform_int_distribution<int> size_dist(1, max_nodes);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const int n = size_dist(rng);
        const double density = 0.1 + 0.4 * unit(rng);

        RandomDag dag;
        for (int i = 0; i < n; ++i)
        {
            dag.terms.push_back("T:" + std::to_string(i));
        }
        std::vector<std::string> order = dag.terms;
        std::shuffle(order.begin(), order.end(), rng);
        for (int child = 1; child < n; ++child)
        {
            for (int parent = 0; parent < child; ++parent)
            {
                if (unit(rng) < density)
                {
                    dag.edges.emplace_back(order[child], order[parent]);
                }
            }
        }
        return dag;
    }

    /// Exhaustive path enumeration over an explicit edge list.
    class PathOracle
    {
    public:
        explicit PathOracle(const RandomDag& dag)
        {
            for (const auto& t : dag.terms)
            {
                m_parents[t];
                m_children[t];
            }
            for (const auto& [child, parent] : dag.edges)
            {
                m_parents[child].insert(parent);
                m_children[parent].insert(child);
            }
            for (const auto& [term, parents] : m_parents)
            {
                if (parents.empty())
                {
                    std::vector<std::string> path{term};
                    walk_down(path);
                }
            }
        }

        /// Every root-to-leaf path, as node sequences.
        const std::vector<std::vector<std::string>>& paths() const
        {
            return m_paths;
        }

        int depth(const std::string& term) const
        {
            int best = -1;
            for (const auto& path : m_paths)
            {
                auto it = std::find(path.begin(), path.end(), term);
                if (it != path.end())
                {
                    best = std::max(best, static_cast<int>(it - path.begin()));
                }
            }
            return best;
        }

        int branch_length(const std::string& term) const
        {
            int best = -1;
            for (const auto& path : m_paths)
            {
                if (std::find(path.begin(), path.end(), term) != path.end())
                {
                    best = std::max(best, static_cast<int>(path.size()) - 1);
                }
            }
            return best;
        }

        double score(const std::string& term) const
        {
            const int b = branch_length(term);
            return b == 0 ? 1.0 : static_cast<double>(depth(term)) / b;
        }

    private:
        void walk_down(std::vector<std::string>& path)
        {
            const auto& kids = m_children.at(path.back());
            if (kids.empty())
            {
                m_paths.push_back(path);
                return;
            }
            for (const auto& kid : kids)
            {
                path.push_back(kid);
                walk_down(path);
                path.pop_back();
            }
        }

        std::map<std::string, std::set<std::string>> m_parents;
        std::map<std::string, std::set<std::string>> m_children;
        std::vector<std::vector<std::string>> m_paths;
    };
}
