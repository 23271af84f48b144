#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "seqc/program_io.hpp"

namespace seqc::test {

std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(SEQC_FIXTURE_DIR) / name;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RobotClassDsl fixture_dsl(const std::string& name) { return load_dsl(read_text(fixture(name))); }

Program fixture_program(const std::string& name, const RobotClassDsl& dsl) {
    return load_program(read_text(fixture(name)), dsl);
}

const RobotClassDsl& generic_dsl() {
    static const RobotClassDsl dsl = fixture_dsl("generic.dsl.xml");
    return dsl;
}

Program make_graph(const std::vector<std::pair<std::string, std::vector<std::string>>>& actions,
                   bool shared_resource) {
    std::vector<ResourceInstance> resources;
    std::vector<ActionInstance> out;
    if (shared_resource) resources.push_back({"r", "Worker"});
    for (const auto& [name, preds] : actions) {
        std::string res = shared_resource ? "r" : "r" + name;
        if (!shared_resource) resources.push_back({res, "Worker"});
        std::vector<ConstraintEdge> edges;
        for (const auto& p : preds) edges.push_back({p});
        out.emplace_back(name, "Step", res, std::vector<ArgBinding>{}, std::nullopt, std::move(edges));
    }
    return Program("G", "Generic", std::move(resources), {}, std::move(out));
}

RandomCase random_case(std::mt19937& rng, const RandomOptions& o) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    const int kComponents = 3;
    std::vector<ResourceComponentTypeDef> components;
    std::vector<std::string> all_types;
    for (int c = 0; c < kComponents; ++c) {
        ResourceComponentTypeDef comp{"K" + std::to_string(c), {}};
        for (char t : {'a', 'b'}) {
            ActionTypeDef a;
            a.identifier = comp.type_name + t;
            comp.actions.push_back(a);
            all_types.push_back(a.identifier);
        }
        components.push_back(std::move(comp));
    }
    if (o.allow_mutex) {
        for (auto& comp : components)
            for (auto& a : comp.actions)
                for (const auto& other : all_types)
                    if (a.identifier <= other && coin(rng) < o.mutex_probability / 2)
                        a.mutex_types.insert(other);
    }
    RobotClassDsl dsl("Random", {}, std::move(components));

    int n = pick(1, o.max_actions);
    int k = o.dedicated_resources ? n : pick(1, o.max_resources);
    std::vector<ResourceInstance> resources;
    for (int r = 0; r < k; ++r) resources.push_back({"r" + std::to_string(r), "K" + std::to_string(pick(0, 2))});

    // edges only go forward in a random permutation, so the graph is a DAG
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto name = [](int i) { return std::string(1, static_cast<char>('A' + i)); };

    std::vector<ActionInstance> actions;
    for (int pos = 0; pos < n; ++pos) {
        int i = perm[pos];
        const auto& res = o.dedicated_resources ? resources[pos] : resources[pick(0, k - 1)];
        std::string type = res.component_type + (coin(rng) < 0.5 ? "a" : "b");
        std::vector<ConstraintEdge> edges;
        for (int before = 0; before < pos; ++before)
            if (coin(rng) < o.edge_probability) edges.push_back({name(perm[before])});
        actions.emplace_back(name(i), type, res.name, std::vector<ArgBinding>{}, std::nullopt, std::move(edges));
    }
    return {std::move(dsl), Program("Rand", "Random", std::move(resources), {}, std::move(actions))};
}

}  // namespace seqc::test
