#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "seqc/dsl.hpp"
#include "seqc/model.hpp"

namespace seqc::test {

std::filesystem::path fixture(const std::string& name);
std::string read_text(const std::filesystem::path& path);

RobotClassDsl fixture_dsl(const std::string& name);
Program fixture_program(const std::string& name, const RobotClassDsl& dsl);

/// Program built in memory from `name -> predecessors`, every action of type
/// Step from the Generic fixture DSL. `resource_of` defaults to one resource
/// per action (r<name>).
Program make_graph(const std::vector<std::pair<std::string, std::vector<std::string>>>& actions,
                   bool shared_resource = false);
const RobotClassDsl& generic_dsl();

struct RandomOptions {
    int max_actions = 6;
    int max_resources = 3;
    double edge_probability = 0.3;
    double mutex_probability = 0.25;
    bool dedicated_resources = false;  // one resource per action
    bool allow_mutex = true;
};

struct RandomCase {
    RobotClassDsl dsl;
    Program program;
};

/// A random DSL (three components with two action types each, random mutex
/// pairs) and a random DAG program over it. Actions carry no parameters, so
/// the only possible validation errors are mutex violations.
RandomCase random_case(std::mt19937& rng, const RandomOptions& options = {});

}  // namespace seqc::test
