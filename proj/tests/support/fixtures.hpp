#pragma once

#include <map>
#include <string>

#include "adjustmcmc/graph.hpp"
#include "adjustmcmc/model.hpp"

namespace fixtures {

using adjustmcmc::Dag;
using adjustmcmc::Edge;
using adjustmcmc::NodeId;

// Figure 1: T=0, nodes 1..8 keep their labels, Y=9.
struct TenNode {
    static constexpr NodeId T = 0;
    static constexpr NodeId Y = 9;
    static Dag dag() {
        std::vector<Edge> e{{T, 1}, {1, 2}, {2, Y}, {2, 4}, {3, 1}, {5, T}, {8, 5}, {5, 6}, {7, 6}, {7, Y}};
        return Dag(10, e);
    }
};

// Figure 3: x, y and labelled nodes 2, 4..9.
struct NineNode {
    static NodeId id(const std::string& label) {
        static const std::map<std::string, NodeId> ids{{"x", 0}, {"y", 1}, {"2", 2}, {"4", 3}, {"5", 4},
                                                       {"6", 5}, {"7", 6}, {"8", 7}, {"9", 8}};
        return ids.at(label);
    }
    static Dag dag() {
        auto e = [](const char* a, const char* b) { return Edge{id(a), id(b)}; };
        std::vector<Edge> edges{e("x", "2"), e("2", "y"), e("4", "2"), e("6", "x"), e("6", "5"),
                                e("5", "4"), e("7", "5"), e("8", "7"), e("8", "y"), e("9", "y")};
        return Dag(9, edges);
    }
};

// Figure 4(i): confounded triangle 1→x, 1→y, x→y.
struct Triangle {
    static constexpr NodeId X = 0;
    static constexpr NodeId Y = 1;
    static constexpr NodeId C = 2;  // the node labelled 1
    static Dag dag() {
        std::vector<Edge> e{{C, X}, {C, Y}, {X, Y}};
        return Dag(3, e);
    }
    static adjustmcmc::Sem sem(double cx = 0.8, double cy = 0.8, double xy = 0.5) {
        adjustmcmc::Sem s;
        s.dag = dag();
        s.coeff = Eigen::MatrixXd::Zero(3, 3);
        s.coeff(C, X) = cx;
        s.coeff(C, Y) = cy;
        s.coeff(X, Y) = xy;
        s.noise_var = Eigen::VectorXd::Ones(3);
        return s;
    }
};

}  // namespace fixtures
